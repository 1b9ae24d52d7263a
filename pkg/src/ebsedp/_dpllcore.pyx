# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled DPLL kernel: same algorithm as _dpll_py (unit propagation to
fixpoint, branch on smallest unassigned variable, true before false), with
flat integer arrays for speed."""

from cpython.mem cimport PyMem_Malloc, PyMem_Free


def solve(clauses):
    """Return a total satisfying assignment over mentioned variables, or None."""
    cdef list flat = []
    cdef list starts = [0]
    cdef int nlits = 0
    for c in clauses:
        if len(c) == 0:
            return None
        for x in c:
            flat.append(x)
            nlits += 1
        starts.append(nlits)
    variable_list = sorted({abs(l) for l in flat})
    if not variable_list:
        return {}
    cdef int nvars = len(variable_list)
    cdef int nclauses = len(starts) - 1
    # dense reindex: var -> 1..nvars in ascending order
    index_of = {v: i + 1 for i, v in enumerate(variable_list)}

    cdef int *lits = <int *> PyMem_Malloc(nlits * sizeof(int))
    cdef int *cstart = <int *> PyMem_Malloc((nclauses + 1) * sizeof(int))
    cdef signed char *assign = <signed char *> PyMem_Malloc((nvars + 1) * sizeof(signed char))
    cdef int *trail = <int *> PyMem_Malloc((nvars + 1) * sizeof(int))
    cdef int *dec_var = <int *> PyMem_Malloc((nvars + 1) * sizeof(int))
    cdef signed char *dec_tried = <signed char *> PyMem_Malloc((nvars + 1) * sizeof(signed char))
    if not (lits and cstart and assign and trail and dec_var and dec_tried):
        raise MemoryError()
    cdef int i, j, lit, v, val, unit, unassigned, var
    cdef int trail_len = 0, ndec = 0
    cdef bint changed, satisfied, ok
    try:
        for i in range(nlits):
            lit = flat[i]
            v = index_of[abs(lit)]
            lits[i] = v if lit > 0 else -v
        for i in range(nclauses + 1):
            cstart[i] = starts[i]
        for i in range(nvars + 1):
            assign[i] = -1

        while True:
            # unit propagation
            ok = True
            changed = True
            while changed:
                changed = False
                for i in range(nclauses):
                    satisfied = False
                    unit = 0
                    unassigned = 0
                    for j in range(cstart[i], cstart[i + 1]):
                        lit = lits[j]
                        v = lit if lit > 0 else -lit
                        val = assign[v]
                        if val == -1:
                            unassigned += 1
                            if unassigned > 1:
                                break
                            unit = lit
                        elif (val == 1) == (lit > 0):
                            satisfied = True
                            break
                    if satisfied or unassigned > 1:
                        continue
                    if unassigned == 0:
                        ok = False
                        break
                    v = unit if unit > 0 else -unit
                    assign[v] = 1 if unit > 0 else 0
                    trail[trail_len] = v
                    trail_len += 1
                    changed = True
                if not ok:
                    break
            if ok:
                var = 0
                for i in range(1, nvars + 1):
                    if assign[i] == -1:
                        var = i
                        break
                if var == 0:
                    return {variable_list[i - 1]: assign[i] == 1
                            for i in range(1, nvars + 1)}
                assign[var] = 1
                trail[trail_len] = var
                trail_len += 1
                dec_var[ndec] = var
                dec_tried[ndec] = 0
                ndec += 1
                continue
            # conflict: undo to the most recent decision with an untried branch
            while ndec > 0:
                var = dec_var[ndec - 1]
                while True:
                    trail_len -= 1
                    v = trail[trail_len]
                    assign[v] = -1
                    if v == var:
                        break
                if dec_tried[ndec - 1]:
                    ndec -= 1
                    continue
                dec_tried[ndec - 1] = 1
                assign[var] = 0
                trail[trail_len] = var
                trail_len += 1
                break
            else:
                pass
            if ndec == 0:
                return None
    finally:
        PyMem_Free(lits)
        PyMem_Free(cstart)
        PyMem_Free(assign)
        PyMem_Free(trail)
        PyMem_Free(dec_var)
        PyMem_Free(dec_tried)
