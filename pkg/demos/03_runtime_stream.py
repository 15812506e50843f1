"""
Checking sensor samples at runtime
==================================

Simulate a noisy pendulum sensor, feed the readings through the runtime
checker and count how many the invariant flags.
"""

import json
import random

from newton import compile_source
from newton.runtime import SampleRecord, ToleranceConfig, check_stream, query_invariant

SOURCE = """
time: signal = { symbol = s; derivation = none; }
length: signal = { symbol = m; derivation = none; }
Pi : constant = 3.14159;
g  : constant = 9.8*m*s**-2;
pendulum: invariant(L: length, period: time) = {
   period ~ 2*Pi*((L/g)**(1/2)),
   L > 0*m
}
"""

ir = compile_source(SOURCE)
info = query_invariant(ir, "pendulum")
print("parameters:", [(p.name, p.unit_symbol) for p in info.params])

rng = random.Random(3)
records = []
for t in range(200):
    length = rng.uniform(0.2, 3.0)
    period = 2 * 3.14159 * (length / 9.8) ** 0.5
    # one reading in ten comes from a sticky sensor that is 5% off
    if t % 10 == 7:
        period *= 1.05
    else:
        period *= 1 + rng.gauss(0, 0.002)
    records.append(SampleRecord({"L": length, "period": period}, t=t * 0.1))

tol = ToleranceConfig(rel=0.01)
failures = [r for r in check_stream(ir, "pendulum", records, tol) if not r.passed]
print(f"{len(failures)} of {len(records)} samples violate the invariant")
print("first failure:", json.dumps(failures[0].to_json()))

# A record that lacks a parameter is reported, not raised.
(missing,) = check_stream(ir, "pendulum", [SampleRecord({"L": 1.0})], tol)
print("missing period:", missing.relations[0].reason)
