"""Admissibility census and the report / recheck round trip.

Run with: python demos/05_search_and_reports.py
"""

import json
import tempfile
from pathlib import Path

from rankscatter import admissibility_feasible, create_field, scan_admissible
from rankscatter.cli import main

F16 = create_field(2, 1, 4)

# ---------------------------------------------------------------
# 1. Feasibility first: for (q, n, m) = (2, 4, 3) the relevant gcd is
#    1, every invariant is a power, and no admissible tuple exists.
#    With m = 4 the census finds 47250 admissible tuples out of 15^4.
# ---------------------------------------------------------------
print("m=3 feasible:", admissibility_feasible(F16, 3))
print("m=4 feasible:", admissibility_feasible(F16, 4))
census = scan_admissible(F16, 4)
print(f"census: {census['admissible']} / {census['tuples_checked']} admissible")

# ---------------------------------------------------------------
# 2. The same census through the CLI, written as a JSON report, then
#    independently re-verified with `recheck`.
# ---------------------------------------------------------------
with tempfile.TemporaryDirectory() as tmp:
    out = str(Path(tmp) / "census.json")
    code = main(["search", "--field", "2,1,4", "--m", "4", "--out", out])
    print("\nsearch exit code:", code)
    report = json.loads(Path(out).read_text())
    print("schema:", report["schema"])
    print("examples of admissible tuples:", report["result"]["examples"][:2])
    print("recheck exit code:", main(["recheck", out]))

    # A violation report carries its witness and recheck re-derives it.
    bad = str(Path(tmp) / "control.json")
    code = main([
        "verify-scattered", "--field", "2,1,4", "--system", "line-control",
        "--mode", "exhaustive", "--out", bad,
    ])
    print("\nplanted control exit code:", code)
    witness = json.loads(Path(bad).read_text())["result"]["witness"]
    print("witness weight:", witness["weight"], "bound:", witness["bound"])
    print("recheck exit code:", main(["recheck", bad]))
