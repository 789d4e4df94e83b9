"""Walk through plan enumeration on the bundled emergency project.

The project wires twelve tasks into an AND/OR graph: the fire brigade and
the police can each be reached along alternative routes, and the final
extinguish task needs both. Run me to see every distinct plan and how the
first one is laid out in readiness waves.
"""

from plancell import enumerate_plans, first_plan, sample_project

graph = sample_project()
print(f"project: {len(graph.tasks)} tasks, "
      f"entry {graph.entry!r}, exit {graph.exit!r}")
print()

for task in graph.tasks.values():
    if not task.preconditions:
        continue
    groups = " OR ".join(
        "(" + " AND ".join(sorted(g)) + ")" for g in task.preconditions)
    print(f"  {task.id} needs {groups}")
print()

result = enumerate_plans(graph)
print(f"{len(result.plans)} distinct plans:")
for plan in result.plans:
    print(f"  {plan.id}: {'; '.join(plan.steps)}")
print()

quick = first_plan(graph)
print(f"first plan without full enumeration: {'; '.join(quick.steps)}")
