"""
Handing the IR to another tool
==============================

A host compiler does not need to parse Newton. It can read the JSON
document the compiler emits. This walks through writing that document,
reading it back and evaluating an expression straight from the JSON.
"""

import json
import math

from newton import compile_source
from newton.interchange import emit_ir, load_ir

SOURCE = """
time : signal = { name = "second" English; symbol = s; derivation = none; }
distance : signal(i: 0 to 2) = { name = "meter" English; symbol = m; derivation = none; }
speed : signal(i: 0 to 2) = { derivation = distance@i / time; }

limit : constant = 100 * m / s;

bounded: invariant(v: speed) = {
   v@0 <= limit, v@1 <= limit, v@2 <= limit
}
"""

ir = compile_source(SOURCE)
text = emit_ir(ir)
print(text[:300], "...")

# loading validates everything and gives back an equal IR
again = load_ir(text)
assert again == ir and emit_ir(again) == text

doc = json.loads(text)
speed = doc["signals"][2]
print("speed has", speed["components"], "components, dimension", speed["dimension"])


# A tiny evaluator over the prefix form, as a host tool might write it.
def evaluate(node, params, constants):
    op = node[0]
    if op == "num":
        return node[1]
    if op == "unit":
        return 1.0
    if op == "const":
        return constants[node[1]]
    if op == "param":
        return params[f"{node[1]}@{node[2]}" if len(node) == 3 else node[1]]
    if op == "neg":
        return -evaluate(node[1], params, constants)
    if op == "**":
        num, _, den = node[2].partition("/")
        return math.pow(evaluate(node[1], params, constants), int(num) / int(den or 1))
    a, b = (evaluate(x, params, constants) for x in node[1:])
    return {"+": a + b, "-": a - b, "*": a * b, "/": a / b}[op]


constants = {c["name"]: c["value"] for c in doc["constants"]}
reading = {"v@0": 12.0, "v@1": 140.0, "v@2": -3.0}
for rel in doc["invariants"][0]["relations"]:
    lhs = evaluate(rel["lhs"], reading, constants)
    rhs = evaluate(rel["rhs"], reading, constants)
    print(f"{lhs:7.1f} {rel['op']} {rhs:.1f}:", lhs <= rhs)
