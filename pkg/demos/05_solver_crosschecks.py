"""Run the built-in oracle cross-checks programmatically.

Equivalent to ``atomloc validate``: every check pits the production solver
against an independent route (closed forms, RK4 relaxation, the probe-free
linear solve, map symmetries).  Useful as a health check after touching the
numerics.
"""

from atomloc import run_validation_suite

results = run_validation_suite()
width = max(len(r.name) for r in results)
for r in results:
    print(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}")

failed = [r.name for r in results if not r.passed]
print()
print(f"{len(results) - len(failed)}/{len(results)} checks passed"
      + (f"; failing: {', '.join(failed)}" if failed else ""))
