"""Exhaustive sweep of all labelled graphs up to order 6 with the batch checks.

Run: python3 demos/small_orders.py
"""

import time

from spectral_turan import corpus as C

checks = [C.check_identity_c4, C.check_identity_in, C.check_identity_in3,
          C.check_cw4_spectrum, C.check_prop1, C.check_hofmeister, C.check_motzkin,
          C.check_c5pair, lambda b: C.check_turan_step(b, 3)]

for n in range(2, 7):
    t0 = time.perf_counter()
    summ = C.run_checks(C.iter_exhaustive(n), checks, f"n={n}")
    print(f"n={n}: {summ.scanned:>6} graphs, {summ.total_violations} violations, "
          f"{time.perf_counter() - t0:.2f}s")
    # tightest cases per check; identities sit at exactly 0
    tight = sorted(summ.worst_margin.items(), key=lambda kv: kv[1])[:4]
    print("   tightest:", ", ".join(f"{k} {v:.3g}" for k, v in tight))
