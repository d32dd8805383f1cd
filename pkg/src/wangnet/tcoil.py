"""Constant-R bridged T-coil synthesis and analysis.

The bridged-T branches are named as in the five-edge network used
throughout the package::

    a : input  -> tap      L1 in series with R1
    b : tap    -> output   L2 in series with R2
    c : input  -> output   bridging C_B (in parallel with R_B = 1/G_B, symmetric only)
    d : tap    -> ground   L3, R_S, then C in parallel with R_P = 1/G_P
    e : output -> ground   termination R

All transfer functions are ``V_C / V`` from the input node to the load
capacitor and have the form ``1 / (B0 + (D0 + D1*C_B) s + D2*C_B s^2)``.
Pole angles are measured from the negative real axis, so the damping ratio
is ``cos(angle)``.  The coupled-inductor form uses ``M = L3`` with its sign
kept (negative ``M`` means the two windings aid each other when the tap
current splits, the usual T-coil connection).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .network import Element, Network, joint_impedance

REL_TOL = 1e-9

SYMMETRIC = "symmetric"
ASYMMETRIC = "asymmetric"


class DesignError(ValueError):
    """Base class for T-coil design failures."""


class InfeasibleDesignError(DesignError):
    """Inputs admit no realizable design (e.g. R2 < 0, unreachable pole angle)."""


class DegenerateDesignError(DesignError):
    """A design formula hit a zero denominator."""


class UnrealizableError(DesignError):
    """Coupled-inductor conversion needs positive winding inductances."""


class NoCircleError(DesignError):
    """Root-locus radicand is negative; the coefficients are invalid."""


class ConsistencyError(DesignError):
    """A cancellation required by the constant-R relations did not occur."""


@dataclass(frozen=True)
class LoadSpec:
    """Termination R, load C, series R_S and parallel conductance G_P = 1/R_P."""

    R: float
    C: float
    R_S: float = 0.0
    G_P: float = 0.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.C > 0:
            raise ValueError("C must be positive")
        if not self.R_S >= 0:
            raise ValueError("R_S must be non-negative")
        if not self.G_P >= 0:
            raise ValueError("G_P must be non-negative")

    @classmethod
    def with_rp(cls, R: float, C: float, R_S: float = 0.0, R_P: float | None = None) -> "LoadSpec":
        return cls(R, C, R_S, 0.0 if R_P is None or math.isinf(R_P) else 1.0 / R_P)

    @property
    def tau(self) -> float:
        return self.R * self.C


@dataclass(frozen=True)
class TransferCoeffs:
    B0: float
    D0: float
    D1: float
    D2: float

    def B1(self, C_B: float) -> float:
        return self.D0 + self.D1 * C_B

    def B2(self, C_B: float) -> float:
        return self.D2 * C_B

    def denominator(self, C_B: float) -> tuple[float, float, float]:
        return self.B0, self.B1(C_B), self.B2(C_B)


@dataclass(frozen=True)
class TCoilDesign:
    topology: str
    R1: float
    R2: float
    G_B: float | None
    L1: float
    L2: float
    L3: float
    C_B: float
    La: float
    Lb: float
    M: float
    k: float | None
    realizable: bool


# ---------------------------------------------------------------------------
# constant-Z relations of the bridged-T network
# ---------------------------------------------------------------------------

def constraint_residual_asym(a: complex, b: complex, c: complex, d: complex, e: complex) -> complex:
    """Zero exactly when the bridged-T input impedance equals ``e``."""
    if c == 0:
        raise ZeroDivisionError("branch c must be non-zero")
    return (a + b) * (d - e * e / c) + a * b + (a - b) * e - e * e


def constraint_residual_sym(a: complex, c: complex, d: complex, e: complex) -> complex:
    if c == 0:
        raise ZeroDivisionError("branch c must be non-zero")
    return 2 * a * (d - e * e / c) + a * a - e * e


def thevenin(a: complex, b: complex, e: complex, V: complex = 1.0) -> tuple[complex, complex]:
    """Thevenin source seen from the tap of a balanced constant-Z bridged-T."""
    if a + b == 0:
        raise ZeroDivisionError("a + b must be non-zero")
    return V, (b + e) * a / (a + b)


# ---------------------------------------------------------------------------
# coupled-inductor form
# ---------------------------------------------------------------------------

def to_coupled(L1: float, L2: float, L3: float) -> tuple[float, float, float, float]:
    """(L_a, L_b, M, k) of the coupled pair equivalent to the three-inductor T."""
    La, Lb = L1 + L3, L2 + L3
    if La <= 0 or Lb <= 0:
        raise UnrealizableError(f"winding inductances must be positive (La={La:g}, Lb={Lb:g})")
    return La, Lb, L3, L3 / math.sqrt(La * Lb)


def from_coupled(La: float, Lb: float, M: float) -> tuple[float, float, float]:
    return La - M, Lb - M, M


def _finish(topology, R1, R2, G_B, L1, L2, L3, C_B) -> TCoilDesign:
    try:
        La, Lb, M, k = to_coupled(L1, L2, L3)
        ok = abs(k) <= 1 + 1e-12
    except UnrealizableError:
        La, Lb, M, k, ok = L1 + L3, L2 + L3, L3, None, False
    return TCoilDesign(topology, R1, R2, G_B, L1, L2, L3, C_B, La, Lb, M, k, ok and R2 >= 0)


# ---------------------------------------------------------------------------
# symmetric T-coils (L1 = L2, R1 = R2, bridging R_B)
# ---------------------------------------------------------------------------

def design_symmetric(load: LoadSpec, C_B: float) -> TCoilDesign:
    if not C_B > 0:
        raise ValueError("C_B must be positive")
    R, C, RS, GP = load.R, load.C, load.R_S, load.G_P
    R1 = R * R * GP / 2
    G_B = RS / (R * R) + GP / 4
    L1 = R * R * C / 2
    L3 = R * R * C_B - L1 / 2
    return _finish(SYMMETRIC, R1, R1, G_B, L1, L1, L3, C_B)


def sym_transfer_terms(load: LoadSpec) -> TransferCoeffs:
    R, C, RS, GP = load.R, load.C, load.R_S, load.G_P
    return TransferCoeffs(
        B0=1 + GP * (R / 2 + R * R * GP / 4 + RS),
        D0=(2 * R + R * R * GP + 4 * RS) * C / 4,
        D1=R * R * GP,
        D2=R * R * C,
    )


# ---------------------------------------------------------------------------
# asymmetric T-coils (selectable R1, no bridging resistor)
# ---------------------------------------------------------------------------

def r2_from_r1(load: LoadSpec, R1: float) -> float:
    R, RS, GP = load.R, load.R_S, load.G_P
    den = 1 + (RS + R1 - R) * GP
    if den == 0:
        raise DegenerateDesignError("1 + (R_S + R1 - R) G_P is zero")
    return (R * R * GP - R1 * (1 + (RS + R) * GP)) / den


def r1_max(load: LoadSpec) -> float:
    """Largest R1 keeping R2 >= 0."""
    R, RS, GP = load.R, load.R_S, load.G_P
    return R * R * GP / (1 + (RS + R) * GP)


def r1_min(load: LoadSpec) -> float:
    """Lower end of the feasible R1 range (exclusive when positive).

    Below ``R - R_S - 1/G_P`` the factor ``1 + (R_S + R1 - R) G_P`` turns
    negative and R2 flips sign, so heavily loaded outputs cannot use R1 = 0.
    """
    if load.G_P == 0:
        return 0.0
    return max(0.0, load.R - load.R_S - 1 / load.G_P)


def resistance_forms(load: LoadSpec, R1: float, R2: float) -> dict[str, float]:
    """Every printed form of the R1/R2 relation, evaluated for cross-checking."""
    R, RS, GP = load.R, load.R_S, load.G_P
    u = 1 + (RS + R1 - R) * GP
    v = 1 + (RS + R2 + R) * GP
    return {
        "R2": (R * R * GP - R1 * (1 + (RS + R) * GP)) / u,
        "R1": (R * R * GP - R2 * (1 + (RS - R) * GP)) / v,
        "sum_r1": (R - R1) ** 2 * GP / u,
        "sum_r2": (R + R2) ** 2 * GP / v,
        "LT_r1": (R - R1) ** 2 * load.C / u,
        "LT_r2": (R + R2) ** 2 * load.C / v,
    }


def design_asymmetric(load: LoadSpec, R1: float, C_B: float) -> TCoilDesign:
    if not C_B > 0:
        raise ValueError("C_B must be positive")
    R, C, RS, GP = load.R, load.C, load.R_S, load.G_P
    if R1 < 0:
        raise InfeasibleDesignError("R1 must be non-negative")
    if GP == 0 and R1 != 0:
        raise InfeasibleDesignError("without R_P the design requires R1 = R2 = 0")
    if 1 + (R1 + RS - R) * GP <= 0:
        raise InfeasibleDesignError(
            f"R1={R1:g} too small: 1 + (R1 + R_S - R) G_P must be positive "
            f"(R1 > {r1_min(load):g})")
    R2 = r2_from_r1(load, R1)
    if R2 < 0:
        if R2 > -1e-12 * R:
            R2 = 0.0
        else:
            raise InfeasibleDesignError(
                f"R1={R1:g} gives R2={R2:g} < 0; R1 must lie in "
                f"({r1_min(load):g}, {r1_max(load):g}]")
    u = 1 + (R1 + RS - R) * GP
    v = 1 + (R2 + RS + R) * GP
    L1 = (R1 - R) * (R1 + RS - R) * C / (u + math.sqrt(u))
    L2 = (R2 + R) * (R2 + RS + R) * C / (v + math.sqrt(v))
    LT = L1 + L2
    if LT == 0:
        raise DegenerateDesignError("L1 + L2 is zero")
    L3 = R * R * C_B - L1 * L2 / LT
    return _finish(ASYMMETRIC, R1, R2, None, L1, L2, L3, C_B)


def asym_transfer_terms(load: LoadSpec, design: TCoilDesign) -> TransferCoeffs:
    """Transfer coefficients expanded from the Thevenin-reduced circuit.

    ``(Z_Th + R_S + s L3)(G_P + s C) + 1`` is expanded with
    ``Z_Th = (b + e) a / (a + b)``.  The division by ``a + b`` must be exact
    and the ``C_B``-free part of ``L3`` must cancel the ``s^2`` term; either
    failing raises :class:`ConsistencyError`.  Works for any constant-R
    design, symmetric ones included.
    """
    R, C, RS, GP = load.R, load.C, load.R_S, load.G_P
    tau = load.tau
    d = design
    # polynomials in x = s * tau, lowest power first
    a = np.array([d.R1, d.L1 / tau])
    b_e = np.array([d.R2 + R, d.L2 / tau])
    a_b = np.array([d.R1 + d.R2, (d.L1 + d.L2) / tau])
    load_y = np.array([GP * R, C * R / tau])  # (G_P + sC) * R, dimensionless
    num = P.polymul(P.polymul(b_e, a), load_y)
    q, rem = P.polydiv(num, a_b)
    scale = np.max(np.abs(num))
    if np.max(np.abs(rem), initial=0.0) > 1e-9 * scale:
        raise ConsistencyError("a + b does not divide (b + e) a (G_P + sC); inputs are not constant-R")
    L3_free = d.L3 - R * R * d.C_B
    series = P.polymul(np.array([RS, L3_free / tau]), load_y)
    total = P.polyadd(q, series) / R
    total = P.polyadd(total, [1.0])
    total = np.concatenate([total, np.zeros(3 - len(total))]) if len(total) < 3 else total
    if len(total) > 3 and np.max(np.abs(total[3:])) > 1e-9 * np.max(np.abs(total[:3])):
        raise ConsistencyError("transfer denominator is not second order")
    if abs(total[2]) > 1e-9 * max(abs(total[0]), abs(total[1])):
        raise ConsistencyError("C_B-free s^2 term did not cancel")
    return TransferCoeffs(B0=float(total[0]), D0=float(total[1] * tau), D1=R * R * GP, D2=R * R * C)


# ---------------------------------------------------------------------------
# poles, locus, pole-angle design, bandwidth
# ---------------------------------------------------------------------------

def poles(tc: TransferCoeffs, C_B: float) -> tuple[complex, complex]:
    B0, B1, B2 = tc.denominator(C_B)
    if B2 == 0:
        raise ValueError("B2 = 0: transfer function is not second order")
    disc = cmath.sqrt(B1 * B1 - 4 * B2 * B0)
    if disc.real == 0 and disc.imag != 0:
        p = (-B1 + disc) / (2 * B2)
        return p, p.conjugate()
    # stable form for real roots
    qq = -(B1 + math.copysign(1.0, B1) * disc) / 2
    p1, p2 = qq / B2, B0 / qq
    return tuple(sorted((complex(p1), complex(p2)), key=lambda z: (-z.imag, z.real)))


def pole_angle(p: complex) -> float:
    """Degrees from the negative real axis."""
    return math.degrees(math.atan2(abs(p.imag), -p.real))


def root_locus(tc: TransferCoeffs) -> tuple[float, float]:
    """(center, radius) of the circle traced by the complex poles as C_B varies."""
    if not (tc.D0 > 0 and tc.D2 > 0):
        raise ValueError("D0 and D2 must be positive")
    rad = 1 - tc.D0 * tc.D1 / (tc.B0 * tc.D2)
    if rad < 0:
        raise NoCircleError(f"negative radicand {rad:g}")
    return -tc.B0 / tc.D0, tc.B0 / tc.D0 * math.sqrt(rad)


def solve_cb_for_angle(tc: TransferCoeffs, theta: float) -> float:
    """Bridging capacitance placing the poles at ``theta`` degrees.

    With ``D1 > 0`` two values of C_B reach the same angle; the smaller one
    (poles farther from the origin, wider bandwidth) is returned.
    """
    if not 0 < theta < 90:
        raise ValueError("pole angle must lie strictly between 0 and 90 degrees")
    c2 = math.cos(math.radians(theta)) ** 2
    b = 2 * tc.D0 * tc.D1 - 4 * c2 * tc.B0 * tc.D2
    disc = b * b - 4 * (tc.D1 * tc.D0) ** 2
    if disc < 0 or b >= 0:
        top = math.degrees(math.acos(min(1.0, math.sqrt(tc.D0 * tc.D1 / (tc.B0 * tc.D2)))))
        raise InfeasibleDesignError(f"pole angle {theta:g} deg unreachable (max {top:.4g} deg)")
    return 2 * tc.D0 ** 2 / (-b + math.sqrt(disc))


def frequency_response(tc: TransferCoeffs, C_B: float, omega) -> np.ndarray:
    s = 1j * np.asarray(omega, dtype=float)
    B0, B1, B2 = tc.denominator(C_B)
    return 1.0 / (B0 + B1 * s + B2 * s * s)


def bandwidth(tc: TransferCoeffs, C_B: float, load: LoadSpec) -> tuple[float, float]:
    """(-3 dB bandwidth in Hz, ratio to the 1/(2 pi R C) single-pole bandwidth)."""
    B0, B1, B2 = tc.denominator(C_B)
    p = B1 * B1 - 2 * B0 * B2
    root = math.sqrt(p * p + 4 * (B2 * B0) ** 2)
    x = 2 * B0 * B0 / (p + root) if p >= 0 else (root - p) / (2 * B2 * B2)
    w = math.sqrt(x)

    def excess(w):
        return abs(frequency_response(tc, C_B, w)) * B0 * math.sqrt(2) - 1

    if not math.isfinite(w) or abs(excess(w)) > 1e-9:
        lo, hi = 0.0, 1.0 / load.tau
        while excess(hi) > 0:
            hi *= 2
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if excess(mid) > 0 else (lo, mid)
        w = 0.5 * (lo + hi)
    return w / (2 * math.pi), w * load.tau


# ---------------------------------------------------------------------------
# full-network verification
# ---------------------------------------------------------------------------

def branch_impedances(design: TCoilDesign, load: LoadSpec, s):
    """Branch impedances a, b, c, d, e at complex frequency ``s``."""
    s = np.asarray(s, dtype=complex)
    a = s * design.L1 + design.R1
    b = s * design.L2 + design.R2
    c = 1 / (s * design.C_B + (design.G_B or 0.0))
    d = s * design.L3 + load.R_S + 1 / (s * load.C + load.G_P)
    e = np.full_like(s, load.R)
    return a, b, c, d, e


def tcoil_network(design: TCoilDesign, load: LoadSpec) -> tuple[Network, dict[str, str]]:
    """Build the complete circuit; zero-valued series elements become shorts.

    Returns the network and a map from the roles ``in``, ``tap``, ``out``,
    ``load`` and ``gnd`` to node names.
    """

    def L(v):
        return Element("L", v, allow_negative=v < 0) if v != 0 else None

    def Rr(v):
        return Element("R", v) if v > 0 else None

    chains = [
        ("in", "tap", [("L1", L(design.L1)), ("R1", Rr(design.R1))]),
        ("tap", "out", [("L2", L(design.L2)), ("R2", Rr(design.R2))]),
        ("in", "out", [("CB", Element("C", design.C_B))]),
        ("tap", "load", [("L3", L(design.L3)), ("RS", Rr(load.R_S))]),
        ("load", "gnd", [("C", Element("C", load.C))]),
        ("out", "gnd", [("R", Element("R", load.R))]),
    ]
    if design.G_B:
        chains.append(("in", "out", [("RB", Element("R", 1 / design.G_B))]))
    if load.G_P:
        chains.append(("load", "gnd", [("RP", Element("R", 1 / load.G_P))]))

    roles = ["gnd", "in", "out", "tap", "load"]
    parent = {r: r for r in roles}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v, items in chains:
        if all(el is None for _, el in items):
            ru, rv = find(u), find(v)
            if ru != rv:
                keep, drop = sorted((ru, rv), key=roles.index)
                parent[drop] = keep
    nodes = [r for r in roles if find(r) == r]
    edges = []
    for u, v, items in chains:
        live = [(eid, el) for eid, el in items if el is not None]
        here = find(u)
        for k, (eid, el) in enumerate(live):
            there = find(v) if k == len(live) - 1 else f"{eid}_n"
            if there not in nodes:
                nodes.append(there)
            edges.append((eid, here, there, el))
            here = there
    net = Network.create(nodes, edges, reference="gnd", input="in")
    return net, {r: find(r) for r in roles}


def verify_constant_r(design: TCoilDesign, load: LoadSpec, s_samples: Sequence[complex]) -> float:
    """Max ``|Z_in - R| / R`` of the full circuit over the given frequencies."""
    net, _ = tcoil_network(design, load)
    z = joint_impedance(net, np.asarray(s_samples, dtype=complex))
    return float(np.max(np.abs(z - load.R)) / load.R)


def log_sweep(lo: float = 1e6, hi: float = 1e11, n: int = 50) -> np.ndarray:
    return 1j * np.logspace(math.log10(lo), math.log10(hi), n)


# ---------------------------------------------------------------------------
# expanded constant-Z polynomials (multiplied through by sC + G_P)
# ---------------------------------------------------------------------------

def sym_expansion_terms(L1, R1, L3, G_B, C_B, R, R_S, C, G_P) -> list[list[float]]:
    """Individual terms of the expanded symmetric constraint, by power s^3..s^0."""
    return [
        [-2 * C * C_B * L1 * R**2, C * L1**2, 2 * C * L1 * L3],
        [-2 * C * G_B * L1 * R**2, -2 * C_B * G_P * L1 * R**2, -2 * C * C_B * R**2 * R1,
         G_P * L1**2, 2 * G_P * L1 * L3, 2 * C * L1 * R1, 2 * C * L3 * R1, 2 * C * L1 * R_S],
        [-2 * G_B * G_P * L1 * R**2, -2 * C * G_B * R**2 * R1, -2 * C_B * G_P * R**2 * R1,
         -C * R**2, 2 * G_P * L1 * R1, 2 * G_P * L3 * R1, C * R1**2,
         2 * G_P * L1 * R_S, 2 * C * R1 * R_S, 2 * L1],
        [-2 * G_B * G_P * R**2 * R1, -G_P * R**2, G_P * R1**2, 2 * G_P * R1 * R_S, 2 * R1],
    ]


def asym_expansion_terms(L1, L2, L3, R1, R2, C_B, R, R_S, C, G_P) -> list[list[float]]:
    """Individual terms of the expanded asymmetric constraint, by power s^3..s^0."""
    return [
        [-C * C_B * L1 * R**2, -C * C_B * L2 * R**2, C * L1 * L2, C * L1 * L3, C * L2 * L3],
        [-C_B * G_P * L1 * R**2, -C_B * G_P * L2 * R**2, -C * C_B * R**2 * R1,
         -C * C_B * R**2 * R2, G_P * L1 * L2, G_P * L1 * L3, G_P * L2 * L3,
         C * L1 * R, -C * L2 * R, C * L2 * R1, C * L3 * R1, C * L1 * R2,
         C * L3 * R2, C * L1 * R_S, C * L2 * R_S],
        [-C_B * G_P * R**2 * R1, -C_B * G_P * R**2 * R2, G_P * L1 * R,
         -G_P * L2 * R, -C * R**2, G_P * L2 * R1, G_P * L3 * R1, C * R * R1,
         G_P * L1 * R2, G_P * L3 * R2, -C * R * R2,
         C * R1 * R2, G_P * L1 * R_S, G_P * L2 * R_S,
         C * R1 * R_S, C * R2 * R_S, L1, L2],
        [-G_P * R**2, G_P * R * R1, -G_P * R * R2, G_P * R1 * R2,
         G_P * R1 * R_S, G_P * R2 * R_S, R1, R2],
    ]


def _expansion_terms(topology: str, el: dict, load: LoadSpec) -> list[list[float]]:
    R, C, RS, GP = load.R, load.C, load.R_S, load.G_P
    if topology == SYMMETRIC:
        return sym_expansion_terms(el["L1"], el["R1"], el["L3"], el["G_B"], el["C_B"], R, RS, C, GP)
    return asym_expansion_terms(el["L1"], el["L2"], el["L3"], el["R1"], el["R2"],
                                el["C_B"], R, RS, C, GP)


def expansion_mismatch(topology: str, s: complex, el: dict, load: LoadSpec) -> float:
    """Relative gap between the constraint times (sC + G_P) and its expansion.

    The gap is scaled by the sum of the term magnitudes at ``s``.
    """
    R, C, RS, GP = load.R, load.C, load.R_S, load.G_P
    ld = s * C + GP
    d = s * el["L3"] + RS + 1 / ld
    a = s * el["L1"] + el["R1"]
    if topology == SYMMETRIC:
        c = 1 / (s * el["C_B"] + el["G_B"])
        lhs = constraint_residual_sym(a, c, d, R) * ld
    else:
        b = s * el["L2"] + el["R2"]
        lhs = constraint_residual_asym(a, b, 1 / (s * el["C_B"]), d, R) * ld
    terms = _expansion_terms(topology, el, load)
    rhs = sum(sum(group) * s ** (3 - k) for k, group in enumerate(terms))
    scale = sum(sum(abs(t) for t in group) * abs(s) ** (3 - k) for k, group in enumerate(terms))
    return abs(lhs - rhs) / scale


def _design_elements(design: TCoilDesign) -> dict:
    return {"L1": design.L1, "L2": design.L2, "L3": design.L3, "R1": design.R1,
            "R2": design.R2, "C_B": design.C_B, "G_B": design.G_B or 0.0}


def coefficient_residual(design: TCoilDesign, load: LoadSpec) -> float:
    """Largest power-of-s coefficient of the expansion, relative to its terms.

    Every coefficient vanishes for a constant-R design.
    """
    worst = 0.0
    for group in _expansion_terms(design.topology, _design_elements(design), load):
        mag = sum(abs(t) for t in group)
        if mag:
            worst = max(worst, abs(sum(group)) / mag)
    return worst


def b3_residual(design: TCoilDesign, load: LoadSpec) -> float:
    """Inductor quadratic residual relative to its largest term."""
    L1, L2, R1, R2 = design.L1, design.L2, design.R1, design.R2
    RS, R = load.R_S, load.R
    terms = [L2 * L2 * (RS + R1 - R), 2 * L1 * L2 * RS, L1 * L1 * (RS + R2 + R)]
    return abs(sum(terms)) / max(abs(t) for t in terms)


def inductor_ratio_forms(design: TCoilDesign, load: LoadSpec) -> dict[str, float]:
    """L2 from L1 and L1 from L2 via the quadratic-formula solutions.

    The radical equals ``sqrt((R1 + R2) / G_P)`` in magnitude; for the L2
    solution it carries the sign of ``R1 - R`` (the branch matching the
    closed-form L1), for the L1 solution it is positive.
    """
    L1, L2, R1, R2 = design.L1, design.L2, design.R1, design.R2
    R, RS, GP = load.R, load.R_S, load.G_P
    if GP > 0:
        q = math.sqrt((R1 + R2) / GP)
    else:
        q = abs(R - R1) / math.sqrt(1 + (RS + R1 - R) * GP)
    out = {"LT": L1 + L2}
    den4 = RS + R1 - R
    if den4 != 0:
        out["L2"] = L1 * (-RS + math.copysign(q, R1 - R)) / den4
    out["L1"] = L2 * (-RS + q) / (RS + R2 + R)
    return out


def inductor_form_mismatch(design: TCoilDesign, load: LoadSpec) -> float:
    forms = inductor_ratio_forms(design, load)
    LT = resistance_forms(load, design.R1, design.R2)["LT_r1"]
    gaps = [abs(forms["LT"] - LT) / abs(LT), abs(forms["L1"] - design.L1) / abs(design.L1)]
    if "L2" in forms:
        gaps.append(abs(forms["L2"] - design.L2) / abs(design.L2))
    return max(gaps)


def _random_elements(topology: str, rng: np.random.Generator, load: LoadSpec) -> dict:
    tau = load.tau
    lo = load.R * tau
    return {
        "L1": rng.uniform(0.1, 2) * lo,
        "L2": rng.uniform(0.1, 2) * lo,
        "L3": rng.uniform(-1, 1) * lo,
        "R1": rng.uniform(0, 0.2) * load.R,
        "R2": rng.uniform(0, 0.2) * load.R,
        "C_B": rng.uniform(0.01, 1) * load.C,
        "G_B": rng.uniform(0, 0.1) / load.R if topology == SYMMETRIC else 0.0,
    }


def verify_expansion_identity(topology: str, load: LoadSpec | None = None,
                              design: TCoilDesign | None = None, trials: int = 100,
                              rng: np.random.Generator | None = None) -> float:
    """Randomized identity test of the expanded constant-Z polynomials.

    Each trial draws a complex ``s`` and random element values (and a random
    load unless ``load`` is given) and compares the constraint multiplied by
    ``(sC + G_P)`` with its term-by-term expansion.  With a ``design`` the
    expansion coefficients must also vanish, and for asymmetric designs the
    inductor quadratic and the L1/L2 ratio forms are checked.  Returns the
    largest relative gap found.
    """
    rng = rng or np.random.default_rng(0)
    worst = 0.0
    for _ in range(trials):
        ld = load or LoadSpec(rng.uniform(10, 200), rng.uniform(0.1, 10) * 1e-12,
                              rng.uniform(0, 20), rng.uniform(0, 0.01))
        el = _random_elements(topology, rng, ld)
        mag = 10 ** rng.uniform(-2, 2) / ld.tau
        s = mag * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        worst = max(worst, expansion_mismatch(topology, s, el, ld))
    if design is not None:
        if load is None:
            raise ValueError("checking a design needs its load")
        worst = max(worst, coefficient_residual(design, load))
        if topology == ASYMMETRIC:
            worst = max(worst, b3_residual(design, load), inductor_form_mismatch(design, load))
    return worst


# ---------------------------------------------------------------------------
# end-to-end synthesis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DesignReport:
    design: TCoilDesign
    load: LoadSpec
    coeffs: TransferCoeffs
    poles: tuple[complex, complex]
    pole_angle_deg: float
    bw_hz: float
    bwer: float

    def to_dict(self) -> dict:
        d = self.design
        return {
            "topology": "sym" if d.topology == SYMMETRIC else "asym",
            "R1": d.R1, "R2": d.R2, "GB": d.G_B,
            "L1": d.L1, "L2": d.L2, "L3": d.L3, "CB": d.C_B,
            "La": d.La, "Lb": d.Lb, "M": d.M, "k": d.k,
            "poles": [{"re": p.real, "im": p.imag} for p in self.poles],
            "pole_angle_deg": self.pole_angle_deg,
            "bw_hz": self.bw_hz,
            "bwer": self.bwer,
            "realizable": d.realizable,
            "load": {"R": self.load.R, "C": self.load.C, "Rs": self.load.R_S,
                     "Gp": self.load.G_P},
        }


def transfer_terms(load: LoadSpec, topology: str, R1: float = 0.0) -> TransferCoeffs:
    """Transfer coefficients without committing to a bridging capacitance."""
    if topology == SYMMETRIC:
        return sym_transfer_terms(load)
    return asym_transfer_terms(load, design_asymmetric(load, R1, load.C))


def design(load: LoadSpec, topology: str, C_B: float, R1: float = 0.0) -> TCoilDesign:
    if topology == SYMMETRIC:
        return design_symmetric(load, C_B)
    return design_asymmetric(load, R1, C_B)


def synthesize(load: LoadSpec, topology: str, *, angle: float | None = None,
               C_B: float | None = None, R1: float = 0.0) -> DesignReport:
    """Design a T-coil for a pole angle (degrees) or an explicit C_B."""
    if (angle is None) == (C_B is None):
        raise ValueError("give exactly one of angle or C_B")
    if topology not in (SYMMETRIC, ASYMMETRIC):
        raise ValueError(f"unknown topology {topology!r}")
    if topology == SYMMETRIC and R1:
        raise ValueError("R1 is fixed by the load in symmetric designs")
    tc = transfer_terms(load, topology, R1)
    if C_B is None:
        C_B = solve_cb_for_angle(tc, angle)
    dsg = design(load, topology, C_B, R1)
    p = poles(tc, C_B)
    bw, bwer = bandwidth(tc, C_B, load)
    return DesignReport(dsg, load, tc, p, pole_angle(p[0]), bw, bwer)


def report_from_dict(data: dict) -> tuple[TCoilDesign, LoadSpec]:
    """Recover the design and load from :meth:`DesignReport.to_dict` output."""
    try:
        topo = {"sym": SYMMETRIC, "asym": ASYMMETRIC}[data["topology"]]
        ld = data["load"]
        load = LoadSpec(float(ld["R"]), float(ld["C"]), float(ld.get("Rs", 0.0)),
                        float(ld.get("Gp", 0.0)))
        L1, L2, L3 = (float(data[k]) for k in ("L1", "L2", "L3"))
        G_B = data.get("GB")
        dsg = _finish(topo, float(data["R1"]), float(data["R2"]),
                      None if G_B is None else float(G_B), L1, L2, L3, float(data["CB"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed design report: missing or bad field {exc}") from None
    return dsg, load
