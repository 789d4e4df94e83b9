"""Compile a tree into the Boolean cellular rule base and watch it infer.

Every tree node, attribute test, and class assignment becomes one fact
cell; every edge and leaf becomes one rule cell. Classification is then a
fixed-point iteration: an assessment pass marks rules whose premises all
hold, an execution pass establishes their conclusions. The generations
printed below show the wave of facts rolling from the root to a class.
"""

from plancell import (apply_map, compile_tree, discretize_supervised,
                      established_facts, format_fact_table, grow, infer,
                      instance_facts, sample_runs)
from plancell.tree import INFO_GAIN

runs = sample_runs()
dmap = discretize_supervised(runs)
tree = grow(apply_map(dmap, runs), INFO_GAIN, min_leaf=1, discretization=dmap)
kb = compile_tree(tree)

print(f"compiled {kb.fact_count} facts and {kb.rule_count} rules")
print()
print("rules:")
for j, rule in enumerate(kb.rules):
    print(f"  R{j + 1}: {rule}")
print()

case = ("blocks-5", 0.092918, 12.0)
seeds = [kb.facts[0]] + instance_facts(kb, case)
print(f"case {case} seeds the facts {seeds}")
print()

trace = infer(kb, seeds)
for config in trace:
    facts = ", ".join(established_facts(kb, config))
    print(f"generation {config.generation}: {facts}")
print()

final = trace[-1]
label = [f for f in established_facts(kb, final) if f.startswith("class=")]
print(f"classification: {label[0]}")
print()
print("final fact layer:")
print(format_fact_table(kb, final))
