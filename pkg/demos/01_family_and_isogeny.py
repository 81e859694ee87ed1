"""Walk through one curve of the family: torsion, the 5-isogeny and the descent images.

Run with ``python3 demos/01_family_and_isogeny.py``.
"""
from gmpy2 import mpq

from sha5 import build_curve_record, curve_from_uv, isogeny_data
from sha5.curve import tate_normal_model, torsion_subgroup
from sha5.cyclo import primes_above
from sha5.descent import ks5_image, qs5_image

# %% The family y^2 + (d+1)xy + dy = x^3 + dx^2 has (0,0) of order 5
d = mpq(7)
E = tate_normal_model(d)
O = (mpq(0), mpq(0))
print("multiples of (0,0) on E_7:", [E.mul(k, O) for k in range(1, 6)])

# %% Integral model and reduction data for d = u/v
for u, v in [(1, 1), (7, 1), (2, 1), (1, 5)]:
    Ei, red = curve_from_uv(u, v)
    print(f"(u,v)=({u},{v})  a-invariants {tuple(int(a) for a in Ei.ainvs)}  "
          f"conductor {red.conductor}  T={red.T}  U={red.U}  S={red.S}")

# %% The quotient E' = E/<(0,0)> and the dual kernel over Q(zeta_5)
iso = isogeny_data(1, 1)
print("E' a-invariants:", [str(a) for a in iso.target.ainvs])
print("E'(Q) torsion order:", torsion_subgroup(iso.target).order)
print("dual kernel polynomial X^2 + h1 X + h0, (h0, h1) =", [str(c) for c in iso.kernel_poly])
print("d~ =", iso.dtilde)

# %% Images in Q(S,5) and K(S,5)
Ep = iso.target
T = torsion_subgroup(Ep).generators[0]
print("class of (0,0) on E_1 in Q(S,5):", qs5_image(O, 1, 1, (5, 11)).as_dict() or "trivial")
rec = build_curve_record(1, 1)
print("class of the E' torsion in K(S,5):", ks5_image(T, iso, primes_above(rec.S)))
print("dim coker eta_dual =", rec.dim_coker_eta_dual, " dim coker eta =", rec.dim_coker_eta)

# %% A rank-1 curve: the generator is split between the two cokernels
rec = build_curve_record(7, 2)
print(f"(7,2): rank {rec.rank}, generator {[tuple(map(str, g)) for g in rec.generators]}")
print("  P rows:", [p.as_dict() for p in rec.P_basis], " dim coker eta:", rec.dim_coker_eta)
