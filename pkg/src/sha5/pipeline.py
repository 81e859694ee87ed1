"""Database construction, pair analysis, statistics and the plain-text formats.

Curve records are immutable and built independently (one process per
chunk); pair results are likewise independent, and statistics are sums of
counters, so every stage can be split and merged in any order.
"""
from __future__ import annotations

import io
import logging
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Iterable, Iterator

import numpy as np
from scipy import sparse

from .arith import QS5Vector, f5_rank, small_primes
from .curve import reduction_data
from .cyclo import KS5Vector, auxiliary_primes, prime_generators, splitting_type
from .descent import CurveRecord, SearchPolicy, build_curve_record

log = logging.getLogger(__name__)

DB_HEADER = "# sha5-db v1"
RESULTS_HEADER = "# sha5-results v1"
WORKERS_ENV = "SHA5_WORKERS"


class FormatError(ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.lineno = lineno


# ---------------------------------------------------------------------------
# step 0
# ---------------------------------------------------------------------------
def _fmt_q(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def step0_tables(M: int) -> str:
    """Generators of the primes of Q(zeta_5) above every p <= M, plus the character primes.

    Lines are ``p f index c0 c1 c2 c3`` (generator c0 + c1 z + c2 z^2 + c3 z^3)
    followed by ``aux l r a0 a1`` for the auxiliary primes used to read off
    unit classes (r is the image of z, (a0, a1) the characters of z and 1+z).
    """
    out = io.StringIO()
    out.write(f"# step0 M={M}\n")
    for p in small_primes(M):
        if p > M:
            break
        for t in prime_generators(p):
            coeffs = " ".join(_fmt_q(c) for c in t.generator.c)
            out.write(f"{p} {t.residue_degree} {t.index} {coeffs}\n")
    for lam in auxiliary_primes():
        out.write(f"aux {lam.prime} {lam.root} {lam.unit_chars[0]} {lam.unit_chars[1]}\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# curve enumeration
# ---------------------------------------------------------------------------
def curve_parameters(max_height: int, max_conductor: int | None = None) -> list[tuple[int, int]]:
    """Coprime positive (u, v) with max(u, v) <= N (and conductor <= C if given)."""
    out = []
    for u in range(1, max_height + 1):
        for v in range(1, max_height + 1):
            if math.gcd(u, v) != 1:
                continue
            if max_conductor is not None and reduction_data(u, v).conductor > max_conductor:
                continue
            out.append((u, v))
    return out


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _build_one(args):
    u, v, policy, ingested = args
    return build_curve_record(u, v, policy, ingested)


def build_database(params, policy: SearchPolicy | None = None, ingested: dict | None = None, workers: int | None = None):
    """Curve records for ``params`` (sorted by (u, v)); runs in a process pool if workers > 1."""
    policy = policy or SearchPolicy()
    ingested = ingested or {}
    jobs = [(u, v, policy, ingested.get((u, v))) for u, v in sorted(params)]
    workers = workers or worker_count()
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            return pool.map(_build_one, jobs, chunksize=4)
    return [_build_one(j) for j in jobs]


# ---------------------------------------------------------------------------
# DB format
# ---------------------------------------------------------------------------
def _k_support(S) -> list[tuple[int, int]]:
    keys = []
    for p in S:
        g = splitting_type(p)[1]
        keys.extend((p, i) for i in range(g))
    return keys


def _fmt_set(xs) -> str:
    return ",".join(map(str, xs)) or "-"


def _fmt_qrows(rows) -> str:
    parts = []
    for r in rows:
        d = r.as_dict()
        parts.append(",".join(f"{p}:{e}" for p, e in d.items()) or "0")
    return ";".join(parts) or "-"


def _fmt_krows(rows) -> str:
    parts = []
    for r in rows:
        d = r.as_dict()
        primes = ",".join(f"{p}.{i}:{e}" for (p, i), e in d.items())
        parts.append(f"{r.unit_exponents[0]} {r.unit_exponents[1]}" + (f" {primes}" if primes else ""))
    return ";".join(parts) or "-"


def format_record(rec: CurveRecord) -> str:
    rank = "?" if rec.rank is None else str(rec.rank)
    tag = rec.rank_tag if rec.complete else "incomplete"
    torsion = f"{_fmt_qrows(rec.torsion_P)} / {_fmt_krows(rec.torsion_Q)}"
    return " | ".join([
        f"{rec.u} {rec.v}", f"{rank} {tag}", _fmt_set(rec.S), _fmt_set(rec.T), _fmt_set(rec.U),
        str(rec.conductor), _fmt_qrows(rec.P_basis), _fmt_krows(rec.Q_basis), torsion,
    ])


def _parse_set(s: str) -> tuple:
    s = s.strip()
    return () if s == "-" else tuple(int(x) for x in s.split(","))


def _parse_qrows(s: str, S) -> tuple:
    s = s.strip()
    if s == "-":
        return ()
    rows = []
    for part in s.split(";"):
        d = {}
        part = part.strip()
        if part != "0":
            for item in part.split(","):
                p, e = item.split(":")
                d[int(p)] = int(e) % 5
        if set(d) - set(S):
            raise ValueError(f"prime outside S in {part!r}")
        rows.append(QS5Vector(tuple(S), tuple(d.get(p, 0) for p in S)))
    return tuple(rows)


def _parse_krows(s: str, keys) -> tuple:
    s = s.strip()
    if s == "-":
        return ()
    rows = []
    for part in s.split(";"):
        bits = part.split()
        a0, a1 = int(bits[0]) % 5, int(bits[1]) % 5
        d = {}
        if len(bits) > 2:
            for item in bits[2].split(","):
                k, e = item.split(":")
                p, i = k.split(".")
                d[(int(p), int(i))] = int(e) % 5
        if set(d) - set(keys):
            raise ValueError(f"prime ideal outside S in {part!r}")
        rows.append(KS5Vector((a0, a1), tuple(keys), tuple(d.get(k, 0) for k in keys)))
    return tuple(rows)


def parse_record(line: str) -> CurveRecord:
    cols = [c.strip() for c in line.split("|")]
    if len(cols) != 9:
        raise ValueError(f"expected 9 columns, got {len(cols)}")
    u, v = (int(x) for x in cols[0].split())
    rank_s, tag = cols[1].split()
    rank = None if rank_s == "?" else int(rank_s)
    S, T, U = _parse_set(cols[2]), _parse_set(cols[3]), _parse_set(cols[4])
    keys = _k_support(S)
    P = _parse_qrows(cols[6], S)
    Q = _parse_krows(cols[7], keys)
    tP, tQ = cols[8].split("/")
    torsion_P, torsion_Q = _parse_qrows(tP, S), _parse_krows(tQ, keys)
    complete = tag != "incomplete"
    dim_eta = f5_rank([q.on(keys) for q in Q]) if Q else 0
    return CurveRecord(u, v, S, T, U, int(cols[5]), rank, tag if complete else "unknown",
                       P, Q, dim_eta, torsion_P, torsion_Q, (), complete)


def write_database(records: Iterable[CurveRecord], path) -> None:
    with open(path, "w") as fh:
        fh.write(DB_HEADER + "\n")
        fh.write("# u v | rank tag | S | T | U | conductor | P rows | Q rows | torsion P rows / torsion Q rows\n")
        for rec in sorted(records, key=lambda r: (r.u, r.v)):
            fh.write(format_record(rec) + "\n")


def read_database(path) -> list[CurveRecord]:
    out = []
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            if n == 1 and not line.startswith(DB_HEADER):
                raise FormatError(path, n, f"missing header {DB_HEADER!r}")
            if not line.strip() or line.startswith("#"):
                continue
            try:
                out.append(parse_record(line))
            except (ValueError, IndexError) as exc:
                raise FormatError(path, n, str(exc)) from None
    return out


# ---------------------------------------------------------------------------
# generator ingestion: "u v rank x1 y1 [x2 y2 ...]"
# ---------------------------------------------------------------------------
def read_generators(path) -> dict:
    from gmpy2 import mpq

    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            bits = line.split()
            try:
                u, v, rank = int(bits[0]), int(bits[1]), int(bits[2])
                coords = [mpq(b) for b in bits[3:]]
            except (ValueError, IndexError):
                raise FormatError(path, n, "expected 'u v rank x1 y1 ...'") from None
            if len(coords) % 2:
                raise FormatError(path, n, "odd number of coordinates")
            out[(u, v)] = (rank, [(coords[i], coords[i + 1]) for i in range(0, len(coords), 2)])
    return out


def write_generators(records: Iterable[CurveRecord], path) -> None:
    with open(path, "w") as fh:
        fh.write("# u v rank x1 y1 [x2 y2 ...]  (integral model)\n")
        for rec in sorted(records, key=lambda r: (r.u, r.v)):
            if not rec.complete:
                continue
            coords = " ".join(f"{_fmt_q(x)} {_fmt_q(y)}" for x, y in rec.generators)
            fh.write(f"{rec.u} {rec.v} {rec.rank} {coords}".rstrip() + "\n")


# ---------------------------------------------------------------------------
# step 2
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PairResult:
    u1: int
    v1: int
    u2: int
    v2: int
    L: int
    dim_coker_phi_dual: int
    dim_coker_eta1: int
    dim_coker_eta2: int
    dim_coker_psi: int
    G: int
    sha_nonsquare: bool
    rank_sum: int
    re_parity_match: bool
    confidence: str
    T_union: int = 0
    U_inter: int = 0
    re_exponent_parity: int = 0


def _union(a, b) -> list:
    return sorted(set(a) | set(b))


def _phi_dual_rank(rows1, rows2, S) -> int:
    return f5_rank([r.on(S) for r in list(rows1) + list(rows2)])


def _psi_rank(rows1, rows2, keys, n: int = 1) -> int:
    """GF(5) rank of n*Q1 together with -Q2 (the rank does not depend on n)."""
    mat = [[n * a for a in r.on(keys)] for r in rows1] + [[-a for a in r.on(keys)] for r in rows2]
    return f5_rank(mat)


def _ordered(rec1: CurveRecord, rec2: CurveRecord):
    return (rec1, rec2) if (rec1.u, rec1.v) <= (rec2.u, rec2.v) else (rec2, rec1)


def regulator_parity(rec1: CurveRecord, rec2: CurveRecord, dpd: int, dpsi: int) -> int:
    """Parity of the 5-adic valuation of the regulator quotient.

    v5(R_B / R_{E1 x E2}) = dim_free coker phi_dual - dim_free coker phi, where
    the free parts discard the torsion images of both sides.
    """
    S = _union(rec1.S, rec2.S)
    keys = _k_support(S)
    free_phi_dual = dpd - _phi_dual_rank(rec1.torsion_P, rec2.torsion_P, S)
    # coker phi: dim = d1 + d2 - dim coker psi, and the same on the torsion subspaces
    t1, t2 = len(rec1.torsion_Q), len(rec2.torsion_Q)
    t_psi = _psi_rank(rec1.torsion_Q, rec2.torsion_Q, keys)
    free_phi = (rec1.dim_coker_eta + rec2.dim_coker_eta - dpsi) - (t1 + t2 - t_psi)
    return (free_phi_dual - free_phi) % 2


def pair_confidence(rec1: CurveRecord, rec2: CurveRecord) -> str:
    if all(r.rank is not None and r.rank <= 1 and r.rank_tag == "unconditional" for r in (rec1, rec2)):
        return "unconditional"
    return "conditional"


def pair_analysis(rec1: CurveRecord, rec2: CurveRecord) -> PairResult:
    """L, G and the square / 5 x square verdict for the surface attached to two curves."""
    if not (rec1.complete and rec2.complete):
        raise ValueError("pair analysis needs complete records")
    if (rec1.u, rec1.v) == (rec2.u, rec2.v):
        raise ValueError("pairs of a curve with itself are excluded")
    rec1, rec2 = _ordered(rec1, rec2)
    T_union = len(set(rec1.T) | set(rec2.T))
    U_inter = len(set(rec1.U) & set(rec2.U))
    L = -T_union + U_inter
    S = _union(rec1.S, rec2.S)
    keys = _k_support(S)
    dpd = _phi_dual_rank(rec1.P_basis, rec2.P_basis, S)
    dpsi = _psi_rank(rec1.Q_basis, rec2.Q_basis, keys)
    G = dpd - rec1.dim_coker_eta - rec2.dim_coker_eta + dpsi
    rank_sum = rec1.rank + rec2.rank
    re = regulator_parity(rec1, rec2, dpd, dpsi)
    return PairResult(
        rec1.u, rec1.v, rec2.u, rec2.v, L, dpd, rec1.dim_coker_eta, rec2.dim_coker_eta, dpsi, G,
        bool((L + G) % 2), rank_sum, re == rank_sum % 2, pair_confidence(rec1, rec2),
        T_union, U_inter, re,
    )


def analyze_pairs(records: list[CurveRecord], records2: list[CurveRecord] | None = None) -> Iterator[PairResult]:
    """All unordered pairs of distinct complete curves (of one DB, or across two)."""
    recs = sorted((r for r in records if r.complete), key=lambda r: (r.u, r.v))
    if records2 is None:
        for i, a in enumerate(recs):
            for b in recs[i + 1:]:
                yield pair_analysis(a, b)
        return
    seen = set()
    other = sorted((r for r in records2 if r.complete), key=lambda r: (r.u, r.v))
    for a in recs:
        for b in other:
            key = tuple(sorted([(a.u, a.v), (b.u, b.v)]))
            if key[0] == key[1] or key in seen:
                continue
            seen.add(key)
            yield pair_analysis(a, b)


# ---------------------------------------------------------------------------
# RESULTS format
# ---------------------------------------------------------------------------
RESULT_FIELDS = ("u1", "v1", "u2", "v2", "L", "dim_coker_phi_dual", "dim_coker_eta1", "dim_coker_eta2",
                 "dim_coker_psi", "G", "sha_nonsquare", "rank_sum", "re_parity_match", "confidence",
                 "T_union", "U_inter", "re_exponent_parity")


def format_result(r: PairResult) -> str:
    vals = []
    for f in RESULT_FIELDS:
        x = getattr(r, f)
        vals.append(str(int(x)) if isinstance(x, bool) else str(x))
    return " ".join(vals)


def parse_result(line: str) -> PairResult:
    bits = line.split()
    if len(bits) != len(RESULT_FIELDS):
        raise ValueError(f"expected {len(RESULT_FIELDS)} fields, got {len(bits)}")
    vals = []
    for f, b in zip(RESULT_FIELDS, bits):
        if f == "confidence":
            vals.append(b)
        elif f in ("sha_nonsquare", "re_parity_match"):
            vals.append(b == "1")
        else:
            vals.append(int(b))
    return PairResult(*vals)


def write_results(records, results: Iterable[PairResult], path) -> int:
    """RESULTS file: curve table in the header, then one line per pair. Returns #pairs."""
    n = 0
    with open(path, "w") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for rec in sorted(records, key=lambda r: (r.u, r.v)):
            rank = "?" if rec.rank is None else rec.rank
            status = "ok" if rec.complete else "incomplete"
            fh.write(f"# curve {rec.u} {rec.v} {rank} {rec.conductor} {status}\n")
        fh.write("# " + " ".join(RESULT_FIELDS) + "\n")
        for r in sorted(results, key=lambda r: (r.u1, r.v1, r.u2, r.v2)):
            fh.write(format_result(r) + "\n")
            n += 1
    return n


def read_results(path):
    """(curves dict (u, v) -> (rank, conductor, complete), iterator of PairResult)."""
    curves = {}
    fh = open(path)
    first = fh.readline()
    if not first.startswith(RESULTS_HEADER):
        fh.close()
        raise FormatError(path, 1, f"missing header {RESULTS_HEADER!r}")
    lineno = 1
    pending = None
    for line in fh:
        lineno += 1
        if line.startswith("# curve "):
            b = line.split()
            rank = None if b[4] == "?" else int(b[4])
            curves[(int(b[2]), int(b[3]))] = (rank, int(b[5]), b[6] == "ok")
        elif not line.startswith("#"):
            pending = line
            break

    def rows():
        nonlocal lineno
        try:
            if pending is not None and pending.strip():
                try:
                    yield parse_result(pending)
                except ValueError as exc:
                    raise FormatError(path, lineno, str(exc)) from None
            for line in fh:
                lineno += 1
                if not line.strip() or line.startswith("#"):
                    continue
                try:
                    yield parse_result(line)
                except ValueError as exc:
                    raise FormatError(path, lineno, str(exc)) from None
        finally:
            fh.close()

    return curves, rows()


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------
TABLE1_HEIGHTS = (50000, 4617, 3375, 3072, 2695, 2000, 1000, 900, 800, 700, 600, 500, 400, 300, 200, 100, 50)
TABLE5_CONDUCTORS = (10**6, 800000, 600000, 400000, 200000, 100000, 80000, 60000, 40000, 20000, 10000, 5000, 1000)
DEFAULT_CONDUCTOR = 10**6


def percent(num: int, den: int, places: int = 3) -> str:
    """Percentage rounded half-to-even to ``places`` decimals."""
    if den == 0:
        return "-"
    q = Decimal(100 * num) / Decimal(den)
    return str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def local_exponent(L: int) -> int:
    """5-exponent of the local factor including the real place (coker 0, kernel Z/5)."""
    return L - 1


def global_exponent(G: int) -> int:
    """5-exponent of the global factor including ker phi_Q = Z/5."""
    return G + 1


@dataclass
class StatsReport:
    """Aggregated counts; ``merge`` is plain counter addition."""

    curves: dict = field(default_factory=dict)  # (u, v) -> (rank, conductor, complete)
    cells: Counter = field(default_factory=Counter)

    def add(self, r: PairResult) -> None:
        c1, c2 = self.curves[(r.u1, r.v1)], self.curves[(r.u2, r.v2)]
        ranks = tuple(sorted((c1[0], c2[0])))
        height = max(r.u1, r.v1, r.u2, r.v2)
        cond = max(c1[1], c2[1])
        local_sq = local_exponent(r.L) % 2 == 0
        global_sq = global_exponent(r.G) % 2 == 0
        reg_sq = r.re_exponent_parity == 0
        key = (ranks, height, cond, not r.sha_nonsquare, r.re_parity_match, local_sq, global_sq,
               r.T_union % 2, r.U_inter % 2, reg_sq, r.rank_sum % 2)
        self.cells[key] += 1

    def merge(self, other: "StatsReport") -> "StatsReport":
        curves = dict(self.curves)
        curves.update(other.curves)
        return StatsReport(curves, self.cells + other.cells)

    # -- selections ---------------------------------------------------------
    def _select(self, pred):
        n = sq = re = 0
        for key, c in self.cells.items():
            if pred(key):
                n += c
                sq += c * key[3]
                re += c * key[4]
        return n, sq, re

    def pair_summary(self, max_height=None, max_conductor=None, ranks=None):
        def pred(k):
            return ((max_height is None or k[1] <= max_height)
                    and (max_conductor is None or k[2] <= max_conductor)
                    and (ranks is None or ranks(k[0])))
        return self._select(pred)

    def curve_counts(self, max_height=None, max_conductor=None) -> Counter:
        out = Counter()
        for (u, v), (rank, cond, complete) in self.curves.items():
            if max_height is not None and max(u, v) > max_height:
                continue
            if max_conductor is not None and cond > max_conductor:
                continue
            out[rank if complete else "incomplete"] += 1
        return out

    def crosstab(self, row_index: int, col_index: int) -> dict:
        tab = Counter()
        for key, c in self.cells.items():
            tab[(key[row_index], key[col_index])] += c
        return tab

    # -- rendering -----------------------------------------------------------
    def max_height(self) -> int:
        return max((max(uv) for uv in self.curves), default=0)

    def table(self, which: str, max_conductor: int = DEFAULT_CONDUCTOR) -> str:
        render = {
            "1": self._table_curves_by_conductor, "2": self._table_curves_by_height,
            "3": self._table_ranks_conductor, "4": self._table_ranks,
            "5": self._table_by_conductor, "6": self._table_by_height, "crosstabs": self._crosstabs,
        }
        if which not in render:
            raise ValueError(f"unknown table {which!r}")
        if which in ("1", "3"):
            return render[which](max_conductor)
        return render[which]()

    def _rank_columns(self):
        return sorted({c[0] for c in self.curves.values() if c[2] and c[0] is not None})

    def _curve_rows(self, heights, max_conductor):
        ranks = self._rank_columns()
        head = ["N", "#E"] + [f"r={r}" for r in ranks]
        lines = ["\t".join(head)]
        for N in heights:
            cc = self.curve_counts(N, max_conductor)
            total = sum(cc.values())
            row = [str(N), str(total)] + [str(cc.get(r, 0)) for r in ranks]
            if cc.get("incomplete"):
                row.append(f"incomplete={cc['incomplete']}")
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def _table_curves_by_conductor(self, C):
        top = self.max_height()
        heights = [top] + [h for h in TABLE1_HEIGHTS if h < top]
        return f"# curves with conductor <= {C}\n" + self._curve_rows(heights, C)

    def _table_curves_by_height(self):
        top = self.max_height()
        heights = sorted({top} | set(range(10, top + 1, 10)), reverse=True)
        return self._curve_rows(heights, None)

    def _rank_classes(self):
        ranks = self._rank_columns()
        same = [(f"r={r}", (lambda rr, r=r: rr == (r, r))) for r in ranks]
        mixed = [(f"r={a}, r={b}", (lambda rr, a=a, b=b: rr == (a, b)))
                 for i, a in enumerate(ranks) for b in ranks[i + 1:]]
        low = [("r<=1", lambda rr: rr[1] is not None and rr[1] <= 1)]
        return same + mixed + low

    def _rank_table(self, max_conductor):
        lines = ["class\t#B\t%sha=square\t%RE=rk"]
        for name, pred in self._rank_classes():
            n, sq, re = self.pair_summary(max_conductor=max_conductor, ranks=pred)
            lines.append(f"{name}\t{n}\t{percent(sq, n)}\t{percent(re, n, 2)}")
        return "\n".join(lines) + "\n"

    def _table_ranks_conductor(self, C):
        return f"# pairs of curves with conductor <= {C}\n" + self._rank_table(C)

    def _table_ranks(self):
        return self._rank_table(None)

    def _table_by_conductor(self):
        lines = ["C\t#E\t#B\t%sha=square\t%RE=rk"]
        for C in TABLE5_CONDUCTORS:
            ne = sum(v for k, v in self.curve_counts(None, C).items() if k != "incomplete")
            n, sq, re = self.pair_summary(max_conductor=C)
            lines.append(f"{C}\t{ne}\t{n}\t{percent(sq, n)}\t{percent(re, n, 2)}")
        return "\n".join(lines) + "\n"

    def _table_by_height(self):
        top = self.max_height()
        lines = ["N\t#E\t#B\t%sha=square\t%RE=rk"]
        for N in sorted({top} | set(range(10, top + 1, 10)), reverse=True):
            ne = sum(v for k, v in self.curve_counts(N, None).items() if k != "incomplete")
            n, sq, re = self.pair_summary(max_height=N)
            lines.append(f"{N}\t{ne}\t{n}\t{percent(sq, n)}\t{percent(re, n, 2)}")
        return "\n".join(lines) + "\n"

    def _crosstabs(self):
        total = sum(self.cells.values())
        specs = [
            ("local x global", 5, 6, ("local=square", "local!=square"), ("global=square", "global!=square"), True),
            ("#(T1|T2) x #(U1&U2) parity", 7, 8, ("#T even", "#T odd"), ("#U even", "#U odd"), False),
            ("regulator x rank parity", 9, 10, ("regulator=square", "regulator!=square"), ("rk even", "rk odd"), True),
            ("local x rank parity", 5, 10, ("local=square", "local!=square"), ("rk even", "rk odd"), True),
        ]
        out = []
        for title, ri, ci, rnames, cnames, rows_bool in specs:
            tab = self.crosstab(ri, ci)
            rvals = (True, False) if rows_bool else (0, 1)
            cvals = (True, False) if ci == 6 else (0, 1)
            out.append(f"# {title} ({total} pairs)")
            out.append("\t" + "\t".join(cnames))
            for rv, rn in zip(rvals, rnames):
                out.append(rn + "\t" + "\t".join(percent(tab.get((rv, cv), 0), total) for cv in cvals))
        return "\n".join(out) + "\n"


def stats_from_results(path) -> StatsReport:
    curves, rows = read_results(path)
    rep = StatsReport(curves)
    for r in rows:
        rep.add(r)
    return rep


def stats(records: list[CurveRecord], results: Iterable[PairResult]) -> StatsReport:
    rep = StatsReport({(r.u, r.v): (r.rank, r.conductor, r.complete) for r in records})
    for r in results:
        rep.add(r)
    return rep


# ---------------------------------------------------------------------------
# local-only mode
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LocalCrossTab:
    pairs: int
    counts: dict  # (T_union parity, U_inter parity) -> count

    def percentages(self, places: int = 2) -> dict:
        return {k: percent(v, self.pairs, places) for k, v in self.counts.items()}

    def local_square_count(self) -> int:
        return sum(c for (t, u), c in self.counts.items() if local_exponent(u - t) % 2 == 0)

    def render(self) -> str:
        p = self.percentages()
        return (f"# #(T1|T2) x #(U1&U2) parity over {self.pairs} pairs\n"
                "\t#U even\t#U odd\n"
                f"#T even\t{p[(0, 0)]}\t{p[(0, 1)]}\n"
                f"#T odd\t{p[(1, 0)]}\t{p[(1, 1)]}\n"
                f"# local quotient square: {percent(self.local_square_count(), self.pairs)}%\n")


def _incidence(sets: list, block_cols=None):
    index = {}
    rows, cols = [], []
    for i, s in enumerate(sets):
        for p in s:
            rows.append(i)
            cols.append(index.setdefault(p, len(index)))
    n = len(sets)
    return sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(n, max(1, len(index))))


def local_only(max_height: int, max_conductor: int | None = None, block: int = 512) -> LocalCrossTab:
    """Parities of #(T1 u T2) and #(U1 n U2) over all unordered pairs of distinct curves.

    Uses only reduction data: #(T1 u T2) = #T1 + #T2 - #(T1 n T2), and the
    intersection sizes of all pairs come from sparse incidence products mod 2.
    """
    params = curve_parameters(max_height, max_conductor)
    reds = [reduction_data(u, v) for u, v in params]
    Ts = [r.T for r in reds]
    Us = [r.U for r in reds]
    MT, MU = _incidence(Ts), _incidence(Us)
    tlen = np.array([len(t) for t in Ts], dtype=np.int64)
    n = len(params)
    counts = Counter()
    for start in range(0, n, block):
        stop = min(n, start + block)
        it = (MT[start:stop] @ MT.T).toarray()
        iu = (MU[start:stop] @ MU.T).toarray()
        tpar = (tlen[start:stop, None] + tlen[None, :] - it) % 2
        upar = iu % 2
        # keep j > i only
        i_idx = np.arange(start, stop)[:, None]
        mask = np.arange(n)[None, :] > i_idx
        code = (tpar * 2 + upar)[mask]
        binc = np.bincount(code, minlength=4)
        for c in range(4):
            counts[(c // 2, c % 2)] += int(binc[c])
    return LocalCrossTab(n * (n - 1) // 2, dict(counts))
