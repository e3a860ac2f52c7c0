"""The M2 and M5 cocycles on 11d superspace, and why the M5 sign is calibrated.

Takes about a minute: the M5 differential has close to 200000 terms.
"""

import time

from superfda.brane_cocycles import calibrated_m_branes, m_brane_cocycles
from superfda.clifford import check_charge_conjugation, check_clifford_relations, standard_model

model = standard_model()
print(check_clifford_relations(model).detail)
print(check_charge_conjugation(model).detail)

t0 = time.perf_counter()
lit = m_brane_cocycles()
m2, m5 = lit["M2"], lit["M5"]
print(f"\nmu_M2 has {len(m2)} terms, mu_M5 has {len(m5)} terms")
print("d mu_M2 = 0:", not lit.d("M2"))
square = lit.product(("M2", "M2"))
print("with the literal mu_M5, d mu_M5 equals +1/2 mu_M2^2:", lit.d("M5") == square.scale("1/2"))

fam, cal = calibrated_m_branes()
flips = {k: v.to_text() for k, v in cal.items() if v != 1}
print("calibration:", flips)
print("after it, d mu_M5 = -1/2 mu_M2^2:", fam.d("M5") == fam.product(("M2", "M2")).scale("-1/2"))
print("so (g4, g7) -> (mu_M2, mu_M5) is a map out of the 4-sphere model:", fam.morphism.is_valid())
print(f"{time.perf_counter() - t0:.1f} s")
