"""
Checking a pendulum specification
=================================

Compile the classic pendulum description, look at the dimensions the
compiler inferred, then break the invariant and read the diagnostic.
"""

from newton import CompileError, compile_source

SOURCE = """
time: signal = {
   name       = "second" English;
   symbol     = s;
   derivation = none;
}

length: signal = {
   name       = "meter" English;
   symbol     = m;
   derivation = none;
}

Pi : constant = 3.14;
g  : constant = 9.8*m*s**-2;

pendulum: invariant(L: length, period: time) = {
   period ~ 2*Pi*((L/g)**(1/2))
}
"""

ir = compile_source(SOURCE, "pendulum.newton")
print("fundamentals:", ", ".join(ir.fundamentals))
for c in ir.constants:
    print(f"constant {c.name} = {c.value} with dimension {ir.format_dim(c.dimension)}")

# both sides of the relation come out as plain time
(rel,) = ir.invariant("pendulum").relations
print("lhs:", ir.format_dim(rel.lhs.dim), " rhs:", ir.format_dim(rel.rhs.dim))

# Dropping the square root leaves time on one side and length on the other.
broken = SOURCE.replace("period ~ 2*Pi*((L/g)**(1/2))", "period ~ L")
try:
    compile_source(broken, "broken.newton")
except CompileError as exc:
    for d in exc.diagnostics:
        print(d.format())
