"""
Optical netlists: element records, a line-oriented parser and renderer, and
the builder for the tripartite-entanglement setup.

Netlist grammar (one statement per line, ``#`` starts a comment)::

    modes N
    tms i j r            two-mode squeezer
    bs i j t             beamsplitter, transmission amplitude t
    hwp i j theta_deg    half-wave plate + PBS, t = sin(2 theta), rho = cos(2 theta)
    ps i phi_rad         phase shift
    loss i xi            attenuation, amplitude transmissivity xi
    disp i xs ys         displacement
    detect bell i j eta  Bell-type sum/difference detection
    detect x i eta       amplitude-quadrature detection
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from . import gaussian as gs

__all__ = [
    "TMS", "BS", "HWP", "PS", "LOSS", "DISP", "BellDetector", "XDetector",
    "CircuitSpec", "SetupParams",
    "NetlistError", "UnknownElement", "ModeOutOfRange", "ParamOutOfDomain", "MalformedNumber",
    "parse_netlist", "render_netlist", "run_circuit", "build_dense_coding_setup",
    "HWP_ANGLE_DEG", "FIRST_SPLITTER_T", "FIRST_SPLITTER_RHO",
]


class DomainError(ValueError):
    def __init__(self, name, message):
        super().__init__(message)
        self.name = name


def _require(ok, name, message):
    if not ok:
        raise DomainError(name, message)


def _finite(*values):
    return all(math.isfinite(v) for v in values)


@dataclass(frozen=True)
class TMS:
    i: int
    j: int
    r: float

    def __post_init__(self):
        _require(_finite(self.r) and self.r >= 0, "r", f"squeeze parameter must be >= 0, got {self.r}")

    def modes(self):
        return (self.i, self.j)

    def apply(self, state):
        return gs.two_mode_squeeze(state, self.i, self.j, self.r)

    def render(self):
        return f"tms {self.i} {self.j} {self.r!r}"


@dataclass(frozen=True)
class BS:
    i: int
    j: int
    t: float

    def __post_init__(self):
        _require(_finite(self.t) and abs(self.t) <= 1, "t", f"transmission must lie in [-1, 1], got {self.t}")

    def modes(self):
        return (self.i, self.j)

    def apply(self, state):
        return gs.beamsplitter(state, self.i, self.j, self.t)

    def render(self):
        return f"bs {self.i} {self.j} {self.t!r}"


@dataclass(frozen=True)
class HWP:
    """Half-wave plate at ``theta_deg`` followed by a PBS, as a two-mode mixer."""

    i: int
    j: int
    theta_deg: float

    def __post_init__(self):
        _require(_finite(self.theta_deg), "theta", f"angle must be finite, got {self.theta_deg}")

    def modes(self):
        return (self.i, self.j)

    def mixing(self):
        two_theta = math.radians(2 * self.theta_deg)
        return math.sin(two_theta), math.cos(two_theta)

    def apply(self, state):
        t, rho = self.mixing()
        return gs.beamsplitter(state, self.i, self.j, t, rho)

    def render(self):
        return f"hwp {self.i} {self.j} {self.theta_deg!r}"


@dataclass(frozen=True)
class PS:
    i: int
    phi: float

    def __post_init__(self):
        _require(_finite(self.phi), "phi", f"phase must be finite, got {self.phi}")

    def modes(self):
        return (self.i,)

    def apply(self, state):
        return gs.phase_shift(state, self.i, self.phi)

    def render(self):
        return f"ps {self.i} {self.phi!r}"


@dataclass(frozen=True)
class LOSS:
    i: int
    xi: float

    def __post_init__(self):
        _require(_finite(self.xi) and 0 <= self.xi <= 1, "xi", f"transmissivity must lie in [0, 1], got {self.xi}")

    def modes(self):
        return (self.i,)

    def apply(self, state):
        return gs.loss(state, self.i, self.xi)

    def render(self):
        return f"loss {self.i} {self.xi!r}"


@dataclass(frozen=True)
class DISP:
    i: int
    x_s: float
    y_s: float

    def __post_init__(self):
        _require(_finite(self.x_s), "xs", "displacement must be finite")
        _require(_finite(self.y_s), "ys", "displacement must be finite")

    def modes(self):
        return (self.i,)

    def apply(self, state):
        return gs.displace(state, self.i, self.x_s, self.y_s)

    def render(self):
        return f"disp {self.i} {self.x_s!r} {self.y_s!r}"


@dataclass(frozen=True)
class BellDetector:
    i: int
    j: int
    eta: float

    def __post_init__(self):
        _require(_finite(self.eta) and 0 <= self.eta <= 1, "eta", f"efficiency must lie in [0, 1], got {self.eta}")

    def modes(self):
        return (self.i, self.j)

    def render(self):
        return f"detect bell {self.i} {self.j} {self.eta!r}"


@dataclass(frozen=True)
class XDetector:
    i: int
    eta: float

    def __post_init__(self):
        _require(_finite(self.eta) and 0 <= self.eta <= 1, "eta", f"efficiency must lie in [0, 1], got {self.eta}")

    def modes(self):
        return (self.i,)

    def render(self):
        return f"detect x {self.i} {self.eta!r}"


Element = Union[TMS, BS, HWP, PS, LOSS, DISP]
Detector = Union[BellDetector, XDetector]
_TWO_MODE = (TMS, BS, HWP, BellDetector)


@dataclass(frozen=True)
class CircuitSpec:
    n_modes: int
    elements: tuple = ()
    detectors: tuple = ()

    def __post_init__(self):
        if isinstance(self.n_modes, bool) or not isinstance(self.n_modes, int) or self.n_modes < 1:
            raise ValueError(f"n_modes must be a positive integer, got {self.n_modes!r}")
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "detectors", tuple(self.detectors))
        for item in self.elements + self.detectors:
            for m in item.modes():
                if not 1 <= m <= self.n_modes:
                    raise ValueError(f"{item} refers to mode {m} outside 1..{self.n_modes}")
            if isinstance(item, _TWO_MODE) and item.i == item.j:
                raise ValueError(f"{item} needs two distinct modes")
        if sum(isinstance(d, BellDetector) for d in self.detectors) > 1:
            raise ValueError("at most one Bell detector is allowed")


# --------------------------------------------------------------------------
# netlist parsing

class NetlistError(ValueError):
    """Base class; ``line`` is the 1-based line number of the offending statement."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownElement(NetlistError):
    pass


class ModeOutOfRange(NetlistError):
    pass


class ParamOutOfDomain(NetlistError):
    def __init__(self, line, name, message=""):
        super().__init__(line, f"parameter {name!r} out of domain{': ' + message if message else ''}")
        self.name = name


class MalformedNumber(NetlistError):
    pass


# keyword -> (class, number of mode ids, parameter names)
_GRAMMAR = {
    "tms": (TMS, 2, ("r",)),
    "bs": (BS, 2, ("t",)),
    "hwp": (HWP, 2, ("theta",)),
    "ps": (PS, 1, ("phi",)),
    "loss": (LOSS, 1, ("xi",)),
    "disp": (DISP, 1, ("xs", "ys")),
}
_DETECTORS = {
    "bell": (BellDetector, 2, ("eta",)),
    "x": (XDetector, 1, ("eta",)),
}


def _int(token, lineno):
    try:
        return int(token)
    except ValueError:
        raise MalformedNumber(lineno, f"expected an integer mode id, got {token!r}") from None


def _float(token, lineno):
    try:
        value = float(token)
    except ValueError:
        raise MalformedNumber(lineno, f"expected a number, got {token!r}") from None
    return value


def _build(lineno, cls, n_ids, names, args, n_modes, keyword):
    if len(args) != n_ids + len(names):
        raise NetlistError(lineno, f"{keyword!r} takes {n_ids + len(names)} arguments, got {len(args)}")
    ids = [_int(tok, lineno) for tok in args[:n_ids]]
    params = [_float(tok, lineno) for tok in args[n_ids:]]
    for m in ids:
        if not 1 <= m <= n_modes:
            raise ModeOutOfRange(lineno, f"mode {m} outside 1..{n_modes}")
    if n_ids == 2 and ids[0] == ids[1]:
        raise ModeOutOfRange(lineno, f"{keyword!r} needs two distinct modes")
    try:
        return cls(*ids, *params)
    except DomainError as exc:
        raise ParamOutOfDomain(lineno, exc.name, str(exc)) from None


def parse_netlist(text: str) -> CircuitSpec:
    """Parse netlist ``text`` into a :class:`CircuitSpec`.

    Raises a :class:`NetlistError` subclass carrying the 1-based line number
    of the first offending statement; nothing is returned on error.
    """
    n_modes = None
    elements, detectors = [], []
    bell_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        keyword, args = tokens[0].lower(), tokens[1:]
        if n_modes is None:
            if keyword != "modes":
                raise NetlistError(lineno, "first statement must be 'modes N'")
            if len(args) != 1:
                raise NetlistError(lineno, "'modes' takes exactly one argument")
            n_modes = _int(args[0], lineno)
            if n_modes < 1:
                raise ParamOutOfDomain(lineno, "N", f"mode count must be >= 1, got {n_modes}")
            continue
        if keyword == "modes":
            raise NetlistError(lineno, "duplicate 'modes' statement")
        if keyword == "detect":
            if not args or args[0].lower() not in _DETECTORS:
                kind = args[0] if args else ""
                raise UnknownElement(lineno, f"unknown detector {kind!r}")
            cls, n_ids, names = _DETECTORS[args[0].lower()]
            det = _build(lineno, cls, n_ids, names, args[1:], n_modes, "detect " + args[0])
            if isinstance(det, BellDetector):
                if bell_seen:
                    raise NetlistError(lineno, "at most one Bell detector is allowed")
                bell_seen = True
            detectors.append(det)
            continue
        if keyword not in _GRAMMAR:
            raise UnknownElement(lineno, f"unknown element {tokens[0]!r}")
        cls, n_ids, names = _GRAMMAR[keyword]
        elements.append(_build(lineno, cls, n_ids, names, args, n_modes, keyword))
    if n_modes is None:
        raise NetlistError(1, "empty netlist: missing 'modes N'")
    return CircuitSpec(n_modes, tuple(elements), tuple(detectors))


def render_netlist(spec: CircuitSpec) -> str:
    """Canonical text form; ``parse_netlist(render_netlist(s)) == s``."""
    lines = [f"modes {spec.n_modes}"]
    lines += [item.render() for item in spec.elements + spec.detectors]
    return "\n".join(lines) + "\n"


def run_circuit(spec: CircuitSpec) -> gs.GaussianState:
    """Apply the elements of ``spec`` in order to vacuum. Detectors are not applied."""
    state = gs.vacuum_state(spec.n_modes)
    for element in spec.elements:
        state = element.apply(state)
    return state


# --------------------------------------------------------------------------
# the tripartite setup

HWP_ANGLE_DEG = 45.0 - 0.5 * math.degrees(math.asin((math.sqrt(2) - 1) / math.sqrt(6)))
FIRST_SPLITTER_T = (1 + math.sqrt(2)) / math.sqrt(6)
FIRST_SPLITTER_RHO = (math.sqrt(2) - 1) / math.sqrt(6)


@dataclass(frozen=True)
class SetupParams:
    """Squeezing, propagation and detection efficiencies of the setup.

    ``xi1_sq``, ``xi2_sq`` and ``eta_sq`` are intensity efficiencies; the
    amplitude factors used by the channels are their square roots.
    """

    r: float = 0.674
    xi1_sq: float = 0.987
    xi2_sq: float = 0.937
    eta_sq: float = 0.95
    g: float = 1 / math.sqrt(2)
    x_s: float = 0.0
    y_s: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"r must be >= 0, got {self.r}")
        for name in ("xi1_sq", "xi2_sq", "eta_sq"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0 <= v <= 1):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if not math.isfinite(self.g):
            raise ValueError(f"gain must be finite, got {self.g}")

    @property
    def xi1(self):
        return math.sqrt(self.xi1_sq)

    @property
    def xi2(self):
        return math.sqrt(self.xi2_sq)

    @property
    def eta(self):
        return math.sqrt(self.eta_sq)


def build_dense_coding_setup(params: SetupParams = SetupParams(), with_detectors: bool = True) -> CircuitSpec:
    """Three-mode circuit producing (c1, c2, c3) on modes (1, 2, 3).

    The EPR pair from the squeezer is mixed by the half-wave plate/PBS with
    ``t = sin 2 theta``; mode 1 leaves as c1 and mode 2 as b2'. b2' is split
    with a vacuum on mode 3 into c2 and c3, and the pi phase on mode 3 fixes
    the sign so that ``X_c1 + X_c2 + X_c3`` is the squeezed combination.
    Listing the plate as acting on (2, 1) puts the negative cross term on c1.
    """
    elements = [
        TMS(1, 2, params.r),
        HWP(2, 1, HWP_ANGLE_DEG),
        BS(2, 3, 1 / math.sqrt(2)),
        PS(3, math.pi),
        LOSS(1, params.xi1),
        LOSS(2, params.xi1),
        LOSS(3, params.xi2),
    ]
    if params.x_s or params.y_s:
        elements.append(DISP(1, params.x_s, params.y_s))
    detectors = ()
    if with_detectors:
        detectors = (BellDetector(1, 2, params.eta), XDetector(3, params.eta))
    return CircuitSpec(3, tuple(elements), detectors)
