"""
Dimensionless groups
====================

Buckingham's theorem says a relation between n quantities of rank k can be
rewritten with n - k dimensionless products. Here we ask the compiler for
those products on two small invariants.
"""

from newton import compile_source
from newton.pi_analysis import dimension_matrix, pi_groups, rank

SOURCE = """
time: signal = { symbol = s; derivation = none; }
length: signal = { symbol = m; derivation = none; }
mass: signal = { symbol = kg; derivation = none; }
speed: signal = { derivation = length / time; }
force: signal = { derivation = mass * length / time**2; }
density: signal = { derivation = mass / length**3; }

g : constant = 9.8*m*s**-2;

pendulum: invariant(L: length, period: time) = {
   period ~ 6.28*((L/g)**(1/2))
}

# drag on a sphere moving through a fluid
drag: invariant(F: force, rho: density, v: speed, d: length) = {
   F ~ 0.25 * rho * v**2 * d**2
}
"""

ir = compile_source(SOURCE)

for name in ("pendulum", "drag"):
    inv = ir.invariant(name)
    m = dimension_matrix(inv)
    print(f"{name}: columns {list(m.columns)}, n={m.n} k={rank(m)}")
    for row_base, row in zip(m.bases, m.entries):
        print(f"   {ir.fundamentals[row_base]:>7}", " ".join(f"{str(x):>3}" for x in row))
    for i, group in enumerate(pi_groups(inv)):
        print(f"   pi_{i} = {group.fraction()}")

# Without the constant, the pendulum has two quantities of rank two: there is
# nothing dimensionless to form, which is why g matters.
print(len(pi_groups(ir.invariant("pendulum"), include_constants=False)), "groups without g")
