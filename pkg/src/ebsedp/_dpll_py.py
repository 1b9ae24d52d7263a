"""Pure-Python DPLL kernel.

Deterministic: unit propagation to fixpoint, then branch on the smallest
unassigned variable, trying true before false.  The compiled kernel in
_dpllcore implements the same algorithm step for step, so both produce
identical models.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence


def solve(clauses: Sequence[Sequence[int]]) -> Optional[Dict[int, bool]]:
    """Return a total satisfying assignment over mentioned variables, or None."""
    for c in clauses:
        if not c:
            return None
    variables = sorted({abs(l) for c in clauses for l in c})
    if not variables:
        return {}
    assign: Dict[int, bool] = {}
    trail: List[int] = []  # assigned vars in order; decisions tracked separately
    decisions: List[List[int]] = []  # [var, tried_false]

    def propagate() -> bool:
        changed = True
        while changed:
            changed = False
            for clause in clauses:
                satisfied = False
                unit = 0
                unassigned = 0
                for lit in clause:
                    val = assign.get(abs(lit))
                    if val is None:
                        unassigned += 1
                        if unassigned > 1:
                            break
                        unit = lit
                    elif (lit > 0) == val:
                        satisfied = True
                        break
                if satisfied or unassigned > 1:
                    continue
                if unassigned == 0:
                    return False
                assign[abs(unit)] = unit > 0
                trail.append(abs(unit))
                changed = True
        return True

    while True:
        if propagate():
            var = next((v for v in variables if v not in assign), None)
            if var is None:
                return dict(assign)
            assign[var] = True
            trail.append(var)
            decisions.append([var, 0])
            continue
        # conflict: undo to the most recent decision with an untried branch
        while decisions:
            dvar, tried_false = decisions[-1]
            while True:
                v = trail.pop()
                del assign[v]
                if v == dvar:
                    break
            if tried_false:
                decisions.pop()
                continue
            decisions[-1][1] = 1
            assign[dvar] = False
            trail.append(dvar)
            break
        else:
            return None
