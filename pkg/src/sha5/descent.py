"""Per-curve descent data: Q(S,5) images of E(Q), K(S,5) images of E'(Q).

The image of E(Q) in E(Q)/5E(Q) is tracked in two layers, following
0 -> coker eta -> E(Q)/5E(Q) -> coker eta_dual -> 0:

* a point P maps to the class of f(P) in Q(S,5) (coker eta_dual);
* a combination X with trivial class lies in eta_dual(E'(Q)); its unique
  preimage Q maps to the class of f(tau(Q)) in K(S,5) (coker eta).

A set of points whose two-layer images are independent is independent
modulo torsion, and once there are rank + 1 of them (torsion included) the
lattice they span has index prime to 5.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .arith import QS5Vector, f5_kernel, f5_rank, qs5_class
from .curve import INFINITY, ReductionData, WeierstrassModel, curve_from_uv, to_tate_coords
from .cyclo import KS5Vector, ks5_class, primes_above
from .isogeny import IsogenyData, f_value, isogeny_data
from .polys import rational_roots
from .search import search_points

log = logging.getLogger(__name__)


class DescentError(ArithmeticError):
    """The descent data contradicts the theory (signals a bug upstream)."""


class _Missing:
    """Marker for 'no rational preimage' (the point at infinity is None)."""

    def __repr__(self):
        return "NO_PREIMAGE"


NO_PREIMAGE = _Missing()


# ---------------------------------------------------------------------------
# the two connecting maps
# ---------------------------------------------------------------------------
def qs5_image(P, u: int, v: int, S) -> QS5Vector:
    """Class of f(P) in Q(S,5) for a point P on the integral model of E_{u/v}."""
    if P is INFINITY:
        return qs5_class(1, S)
    x, y = to_tate_coords(P, v)
    if x == 0 and y == 0:
        return qs5_class(mpq(v, u), S)
    return qs5_class(f_value((x, y)), S)


def ks5_image(Q, iso: IsogenyData, SK) -> KS5Vector:
    """Class of f(tau(Q)) in K(S,5) for a rational point Q on E'."""
    if Q is INFINITY:
        return KS5Vector((0, 0), tuple(t.key for t in SK), tuple(0 for _ in SK))
    R = iso.tau_point(Q)
    if not R[0] and not R[1]:
        raise DescentError("a rational point of E' maps to (0,0) under tau")
    return ks5_class(f_value(R), SK)


# ---------------------------------------------------------------------------
# division by eta and by eta_dual
# ---------------------------------------------------------------------------
def eta_preimage(iso: IsogenyData, Q):
    """A rational Y with eta(Y) = Q, or NO_PREIMAGE."""
    if Q is INFINITY:
        return INFINITY
    E = iso.source
    for x in rational_roots(iso.eta_x_equation(Q[0])):
        for Y in E.lift_x(x):
            img = iso.eta(Y)
            if img == Q:
                return Y
            if img == iso.target.neg(Q):
                return E.neg(Y)
    return NO_PREIMAGE


def eta_dual_preimage(iso: IsogenyData, X):
    """The rational Q with eta_dual(Q) = X, or NO_PREIMAGE if X is not in eta_dual(E'(Q))."""
    if X is INFINITY:
        return INFINITY
    Ep = iso.target
    for x in rational_roots(iso.dual_x_equation(X[0])):
        for Q in Ep.lift_x(x):
            img = iso.eta_dual(Q)
            if img == X:
                return Q
            if img == iso.source.neg(X):
                return Ep.neg(Q)
    return NO_PREIMAGE


def divide_by_5(iso: IsogenyData, X):
    """A rational Y with 5Y = X, or NO_PREIMAGE."""
    Q = eta_dual_preimage(iso, X)
    if Q is NO_PREIMAGE:
        return Q
    Y = eta_preimage(iso, Q)
    if Y is NO_PREIMAGE:
        return Y
    assert iso.source.mul(5, Y) == X
    return Y


# ---------------------------------------------------------------------------
# incremental 5-saturation
# ---------------------------------------------------------------------------
def _combine(E: WeierstrassModel, coeffs, points):
    acc = INFINITY
    for c, P in zip(coeffs, points):
        if c % 5:
            acc = E.add(acc, E.mul(c % 5, P))
    return acc


def _solve_in_span(rows, target):
    """Coefficients c with sum c_i rows_i = target over GF(5), or None."""
    k = f5_kernel(list(rows) + [target])
    for vec in k:
        if vec[-1] % 5:
            inv = pow(vec[-1], -1, 5)
            return [(-c * inv) % 5 for c in vec[:-1]]
    return None


@dataclass
class SaturationState:
    """Points of E(Q) with independent images in E(Q)/5E(Q)."""

    E: WeierstrassModel
    u: int
    v: int
    S: tuple
    SK: list
    iso: IsogenyData | None
    points: list = field(default_factory=list)  # first entry is the torsion point (0,0)
    qrows: list = field(default_factory=list)  # QS5Vectors of points
    combos: list = field(default_factory=list)  # kernel combos (coefficients over points)
    eprimes: list = field(default_factory=list)  # E'(Q) points Q with eta_dual(Q) = combo
    krows: list = field(default_factory=list)  # KS5Vectors of eprimes

    @property
    def free(self) -> list:
        return self.points[1:]

    def _qmatrix(self):
        return [q.on(self.S) for q in self.qrows]

    def _kmatrix(self):
        keys = [t.key for t in self.SK]
        return [k.on(keys) for k in self.krows]

    def _iso(self) -> IsogenyData:
        if self.iso is None:
            self.iso = isogeny_data(self.u, self.v)
        return self.iso

    def add(self, P, depth: int = 0) -> bool:
        """Try to extend by P; returns True if the image rank grew.

        If P is congruent mod 5E(Q) to a combination of the current points
        but independent of them, the quotient (P - combination)/5 is tried
        instead (recursively), which is what saturation requires.
        """
        E = self.E
        if P is INFINITY or depth > 60:
            return False
        a = qs5_image(P, self.u, self.v, self.S)
        qm = self._qmatrix()
        coeffs = _solve_in_span(qm, a.on(self.S)) if qm else ([] if a.is_zero() else None)
        if coeffs is None:
            self.points.append(P)
            self.qrows.append(a)
            # adding an independent Q(S,5) row keeps the kernel combos valid (pad with 0)
            self.combos = [c + [0] for c in self.combos]
            return True
        X = E.sub(P, _combine(E, coeffs, self.points))
        combo = [(-c) % 5 for c in coeffs] + [1]
        iso = self._iso()
        Q = eta_dual_preimage(iso, X)
        if Q is NO_PREIMAGE:
            raise DescentError("trivial Q(S,5) class but not in the image of the dual isogeny")
        b = ks5_image(Q, iso, self.SK)
        keys = [t.key for t in self.SK]
        km = self._kmatrix()
        e = _solve_in_span(km, b.on(keys)) if km else ([] if b.is_zero() else None)
        if e is None:
            self.points.append(P)
            self.qrows.append(a)
            self.combos = [c + [0] for c in self.combos] + [combo]
            self.eprimes.append(Q)
            self.krows.append(b)
            return True
        # Q - sum e_j Q_j lies in eta(E(Q)); then P - (combination) = 5Y
        Ep = iso.target
        Qrest = Q
        for ej, Qj in zip(e, self.eprimes):
            if ej:
                Qrest = Ep.sub(Qrest, Ep.mul(ej, Qj))
        Y = eta_preimage(iso, Qrest)
        if Y is NO_PREIMAGE:
            raise DescentError("trivial K(S,5) class but not in the image of eta")
        total = X
        for ej, cj in zip(e, self.combos):
            if ej:
                total = E.sub(total, E.mul(ej, _combine(E, cj, self.points)))
        if total is INFINITY or E.order(total, 10) is not None:
            return False  # P is dependent on the current points
        return self.add(Y, depth + 1)


def start_state(u: int, v: int, E=None, red=None, iso=None) -> SaturationState:
    if E is None or red is None:
        E, red = curve_from_uv(u, v)
    SK = primes_above(red.S)
    st = SaturationState(E, u, v, tuple(red.S), SK, iso)
    st.add((mpq(0), mpq(0)))
    return st


def saturate_at_5(u: int, v: int, points, iso=None) -> list:
    """Independent points, none of whose nontrivial GF(5)-combinations is 5-divisible mod torsion."""
    st = start_state(u, v, iso=iso)
    for P in points:
        st.add(P)
    return st.free


# ---------------------------------------------------------------------------
# curve records
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class CurveRecord:
    u: int
    v: int
    S: tuple
    T: tuple
    U: tuple
    conductor: int
    rank: int | None
    rank_tag: str
    P_basis: tuple  # QS5Vectors (raw generator images, torsion first)
    Q_basis: tuple  # KS5Vectors
    dim_coker_eta: int
    torsion_P: tuple  # QS5Vectors of torsion generators
    torsion_Q: tuple  # KS5Vectors of E' torsion
    generators: tuple = ()  # free generators (points on the integral model)
    complete: bool = True

    @property
    def dim_coker_eta_dual(self) -> int:
        return f5_rank([p.on(self.S) for p in self.P_basis])

    @property
    def K_support(self) -> list:
        return [t.key for t in primes_above(self.S)]


def coker_eta_dual_basis(u: int, v: int, points, S) -> list:
    """Q(S,5) images of (0,0) and the given generators."""
    return [qs5_image((mpq(0), mpq(0)), u, v, S)] + [qs5_image(P, u, v, S) for P in points]


def _independent(rows, width_of):
    """Greedy GF(5)-independent subset of ``rows`` (order kept)."""
    kept, mat = [], []
    for r in rows:
        vec = width_of(r)
        if f5_rank(mat + [vec]) > len(mat):
            kept.append(r)
            mat.append(vec)
    return kept


def record_from_state(st: SaturationState, red: ReductionData, rank: int, tag: str) -> CurveRecord:
    if len(st.points) != rank + 1:
        raise DescentError("record requested before the lattice reached full rank")
    keys = [t.key for t in st.SK]
    dim_eta = f5_rank(st._kmatrix()) if st.krows else 0
    if dim_eta + f5_rank(st._qmatrix()) != rank + 1:
        raise DescentError("dim coker eta + dim coker eta_dual != rank + 1")
    # K-side rows whose kernel combination only involves the torsion point
    torsion_Q = [row for combo, row in zip(st.combos, st.krows) if not any(c % 5 for c in combo[1:])]
    on_S = lambda q: q.on(st.S)
    on_K = lambda k: k.on(keys)
    return CurveRecord(
        u=st.u, v=st.v, S=red.S, T=red.T, U=red.U, conductor=red.conductor,
        rank=rank, rank_tag=tag,
        P_basis=tuple(_independent(st.qrows, on_S)),
        Q_basis=tuple(_independent(st.krows, on_K)),
        dim_coker_eta=dim_eta,
        torsion_P=tuple(_independent(st.qrows[:1], on_S)),
        torsion_Q=tuple(_independent(torsion_Q, on_K)),
        generators=tuple(st.free),
        complete=True,
    )


def incomplete_record(u: int, v: int, red: ReductionData, rank, tag) -> CurveRecord:
    return CurveRecord(u, v, red.S, red.T, red.U, red.conductor, rank, tag, (), (), 0, (), (), (), False)


@dataclass(frozen=True)
class SearchPolicy:
    """How hard to look for generators: heights start, start*factor, ... up to max_height."""

    start_height: int = 100
    factor: int = 10
    max_height: int = 10**6
    rank_threshold: float = 1e-3


def point_search(E: WeierstrassModel, st: SaturationState, rank: int, policy: SearchPolicy) -> bool:
    """Feed searched points into ``st`` until it holds ``rank`` free generators."""
    H = policy.start_height
    seen = set()
    while len(st.free) < rank and H <= policy.max_height:
        for P in search_points(E, H):
            if len(st.free) >= rank:
                break
            if P in seen:
                continue
            seen.add(P)
            st.add(P)
        H *= policy.factor
    return len(st.free) >= rank


def rank_tag(rank: int | None, source: str) -> str:
    if rank is None:
        return "unknown"
    if source == "ingested":
        return "ingested"
    return "unconditional" if rank <= 1 else "bsd"


def build_curve_record(u: int, v: int, policy: SearchPolicy | None = None, ingested=None) -> CurveRecord:
    """Descent data for E_{u/v}.

    ``ingested`` is an optional (rank, points) pair; the points are fed
    through the same saturation as searched ones and are never trusted
    beyond being points of the curve.
    """
    from .lseries import analytic_rank

    policy = policy or SearchPolicy()
    E, red = curve_from_uv(u, v)
    st = start_state(u, v, E, red)
    if ingested is not None:
        rank, pts = ingested
        for P in pts:
            P = (mpq(P[0]), mpq(P[1]))
            if not E.contains(P):
                raise ValueError(f"ingested point {P} is not on the curve ({u},{v})")
            st.add(P)
        source = "ingested"
    else:
        ar = analytic_rank(E, red, threshold=policy.rank_threshold)
        rank, source = ar.rank, "analytic"
    if rank is None:
        return incomplete_record(u, v, red, None, "unknown")
    if len(st.free) < rank and not point_search(E, st, rank, policy):
        log.warning("(%d,%d): found %d of %d generators", u, v, len(st.free), rank)
        return incomplete_record(u, v, red, rank, rank_tag(rank, source))
    if len(st.free) > rank:
        raise DescentError(f"({u},{v}): more independent points than the rank {rank}")
    return record_from_state(st, red, rank, rank_tag(rank, source))
