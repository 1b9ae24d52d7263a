"""Decision procedures and semantic oracles: bounded SAT, the interleaved
semi-decision procedure, spectra, bounded equivalence, the extensible
bounded-submodel oracle, and bounded search for the least translation bound."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple

from .edp import BoundReport
from .errors import CapExceeded
from .groundsat import (AtomTable, PConst, PropFormula, all_models, dpll_solve,
                        ground_fixed_universe, p_and, p_not, p_or, tseitin)
from .structures import (FiniteStructure, count_structures,
                         enumerate_structures, evaluate)
from .syntax import (EXISTS, FORALL, Atom, Const, Eq, PrenexForm, Term, Var,
                     Vocabulary)

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SatOutcome:
    verdict: str  # SAT | UNSAT | UNKNOWN
    model: Optional[FiniteStructure] = None
    effort: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == SAT and self.model is None:
            raise ValueError("SAT verdict requires a model")

    def to_json_dict(self) -> dict:
        out = {"verdict": self.verdict, "effort": dict(sorted(self.effort.items()))}
        if self.model is not None:
            out["model"] = _structure_obj(self.model)
        return out


@dataclass(frozen=True)
class SpectrumResult:
    nMax: int
    realizable: Tuple[bool, ...]  # index i: size i+1
    witnesses: Mapping[int, FiniteStructure] = field(default_factory=dict)

    def sizes(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i, ok in enumerate(self.realizable) if ok)

    def to_json_dict(self) -> dict:
        return {"nMax": self.nMax, "sizes": list(self.sizes())}


@dataclass(frozen=True)
class EquivResult:
    equivalent: bool
    nCap: int
    countermodel: Optional[FiniteStructure] = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.equivalent


@dataclass(frozen=True)
class EbsVerdict:
    passed: bool
    sigma: Tuple[str, ...]
    B: int
    nMax: int
    models_checked: int
    fail_model: Optional[FiniteStructure] = None
    fail_extension: Optional[Tuple[int, ...]] = None
    # per candidate core: one extension whose completion query is UNSAT
    core_evidence: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...] = ()

    def __bool__(self) -> bool:
        return self.passed

    def to_json_dict(self) -> dict:
        out = {"pass": self.passed, "sigma": list(self.sigma), "B": self.B,
               "nMax": self.nMax, "modelsChecked": self.models_checked}
        if self.fail_model is not None:
            out["failModel"] = _structure_obj(self.fail_model)
            out["failExtension"] = list(self.fail_extension or ())
            out["coreEvidence"] = [
                {"core": list(core), "extension": list(ext)}
                for core, ext in self.core_evidence]
        return out


def _structure_obj(M: FiniteStructure) -> dict:
    import json
    return json.loads(M.to_json())


# ---------------------------------------------------------------------------
# Per-size SAT

def _const_valuations(vocab: Vocabulary, n: int) -> Iterator[Dict[str, int]]:
    for values in itertools.product(range(n), repeat=len(vocab.constants)):
        yield dict(zip(vocab.constants, values))


def _model_to_structure(pf: PrenexForm, n: int, table: AtomTable,
                        assignment: Mapping[int, bool],
                        const_values: Mapping[str, int]) -> FiniteStructure:
    interp: Dict[str, set] = {name: set() for name, _ in pf.vocabulary.predicates}
    for atom_id, (pred, args) in table.items():
        if pred != "=" and assignment.get(atom_id, False):
            interp[pred].add(args)
    return FiniteStructure(pf.vocabulary, n,
                           {k: frozenset(v) for k, v in interp.items()},
                           dict(const_values))


def _sat_at_size(pf: PrenexForm, n: int,
                 node_cap: int = 1_000_000) -> Optional[FiniteStructure]:
    """A model of pf with universe exactly {0..n-1}, or None."""
    for consts in _const_valuations(pf.vocabulary, n):
        prop, table = ground_fixed_universe(pf, n, const_values=consts,
                                            node_cap=node_cap)
        assignment = dpll_solve(tseitin(prop, table))
        if assignment is None:
            continue
        M = _model_to_structure(pf, n, table, assignment, consts)
        if not evaluate(M, pf):
            raise AssertionError("grounding returned an unverifiable model")
        return M
    return None


def decide_sat_bounded(pf: PrenexForm, B: int,
                       node_cap: int = 1_000_000) -> SatOutcome:
    """SAT iff some structure of size ≤ max(B,1) models pf.  Complete only
    under a bounded-model guarantee for pf (e.g. a membership bound B)."""
    if B < 0:
        raise ValueError("bound must be nonnegative")
    if not pf.is_sentence():
        raise ValueError("satisfiability is for sentences")
    sizes = 0
    for n in range(1, max(B, 1) + 1):
        sizes += 1
        M = _sat_at_size(pf, n, node_cap)
        if M is not None:
            return SatOutcome(SAT, M, {"sizes_tried": sizes})
    return SatOutcome(UNSAT, None, {"sizes_tried": sizes})


# ---------------------------------------------------------------------------
# Interleaved model search / refutation search

# private skolem term language: ("c", name) or ("f", name, (args...))
_STerm = Tuple


def _skolemize(pf: PrenexForm) -> Tuple[List[List[Tuple[bool, str, Tuple[_STerm, ...]]]],
                                        List[Tuple[str, int]], List[str]]:
    """CNF clauses over skolem terms, the skolem function signatures, and the
    base constants of the Herbrand universe."""
    env: Dict[str, _STerm] = {}
    universal: List[str] = []
    funcs: List[Tuple[str, int]] = []
    for i, (q, v) in enumerate(pf.prefix):
        if q == FORALL:
            universal.append(v)
            env[v] = ("v", v)
        else:
            fname = f"sk{i}_{v}"
            funcs.append((fname, len(universal)))
            env[v] = ("f", fname, tuple(("v", u) for u in universal))

    def conv(t: Term) -> _STerm:
        if isinstance(t, Const):
            return ("c", t.name)
        return env[t.name]

    clauses = [[(lit.positive,
                 "=" if isinstance(lit.atom, Eq) else lit.atom.predicate,
                 tuple(conv(t) for t in ((lit.atom.left, lit.atom.right)
                                          if isinstance(lit.atom, Eq)
                                          else lit.atom.args)))
                for lit in clause]
               for clause in pf.matrix]
    base = list(pf.vocabulary.constants)
    if not base and not any(a == 0 for _, a in funcs):
        base = ["h0"]
    return clauses, funcs, base


def _subst_sterm(t: _STerm, a: Mapping[str, _STerm]) -> _STerm:
    if t[0] == "v":
        return a[t[1]]
    if t[0] == "f":
        return ("f", t[1], tuple(_subst_sterm(s, a) for s in t[2]))
    return t


def _herbrand_terms(funcs: List[Tuple[str, int]], base: List[str],
                    depth: int, cap: int) -> List[_STerm]:
    terms: List[_STerm] = [("c", c) for c in base]
    seen = set(terms)
    for _ in range(depth):
        new = []
        for fname, arity in funcs:
            for args in itertools.product(terms, repeat=arity):
                t = ("f", fname, args)
                if t not in seen:
                    seen.add(t)
                    new.append(t)
                if len(seen) > cap:
                    raise CapExceeded("herbrand term cap", len(seen), cap)
        terms.extend(new)
    # zero-arity skolem functions are terms at depth 0 already
    for fname, arity in funcs:
        if arity == 0:
            t = ("f", fname, ())
            if t not in seen:
                seen.add(t)
                terms.append(t)
    return terms


def _refute_at_depth(pf: PrenexForm, depth: int, step_cap: int) -> bool:
    """True iff the ground instances up to this term depth are already
    propositionally unsatisfiable (hence pf is unsatisfiable)."""
    clauses, funcs, base = _skolemize(pf)
    univ = sorted({t[1] for cl in clauses for _, _, args in cl
                   for t0 in args for t in _walk_vars(t0)})
    terms = _herbrand_terms(funcs, base, depth, step_cap)
    table = AtomTable()
    cnf: List[List[int]] = []
    uses_eq = any(pred == "=" for cl in clauses for _, pred, _ in cl)

    def charge():
        if len(cnf) > step_cap:
            raise CapExceeded("refutation step cap", len(cnf), step_cap)

    def eq_lit(a: _STerm, b: _STerm) -> Optional[int]:
        if a == b:
            return None
        key = tuple(sorted((repr(a), repr(b))))
        return table.id_of(("=", key))

    for values in itertools.product(terms, repeat=len(univ)):
        a = dict(zip(univ, values))
        for cl in clauses:
            out: List[int] = []
            satisfied = False
            for positive, pred, args in cl:
                gargs = tuple(_subst_sterm(t, a) for t in args)
                if pred == "=":
                    e = eq_lit(gargs[0], gargs[1])
                    if e is None:
                        if positive:
                            satisfied = True
                            break
                        continue
                    out.append(e if positive else -e)
                else:
                    aid = table.id_of((pred, tuple(repr(g) for g in gargs)))
                    out.append(aid if positive else -aid)
            if not satisfied:
                cnf.append(out)
                charge()

    if uses_eq:
        for x, y, z in itertools.permutations(terms, 3):
            ab, bc, ac = eq_lit(x, y), eq_lit(y, z), eq_lit(x, z)
            cnf.append([-ab, -bc, ac])
            charge()
        preds = sorted({(pred, len(args)) for cl in clauses
                        for _, pred, args in cl if pred != "=" and args})
        for pred, arity in preds:
            for t in itertools.product(terms, repeat=arity):
                for u in itertools.product(terms, repeat=arity):
                    if t == u:
                        continue
                    body = []
                    for ta, ua in zip(t, u):
                        e = eq_lit(ta, ua)
                        if e is not None:
                            body.append(-e)
                    pa = table.id_of((pred, tuple(repr(g) for g in t)))
                    pb = table.id_of((pred, tuple(repr(g) for g in u)))
                    cnf.append(body + [-pa, pb])
                    charge()
    return dpll_solve(cnf) is None


def _walk_vars(t: _STerm) -> Iterator[_STerm]:
    if t[0] == "v":
        yield t
    elif t[0] == "f":
        for s in t[2]:
            yield from _walk_vars(s)


def interleaved_sat(pf: PrenexForm,
                    budget: Tuple[int, int, int]) -> SatOutcome:
    """Alternate finite-model search at growing sizes with Herbrand-style
    refutation search at growing term depths; budget = (max model size, max
    ground-term depth, max steps).  UNKNOWN absorbs every exhaustion."""
    n_max, depth_max, step_max = budget
    sizes_tried = depth_reached = 0
    for stage in range(max(n_max, depth_max + 1)):
        if stage < n_max:
            try:
                M = _sat_at_size(pf, stage + 1, node_cap=step_max)
                sizes_tried += 1
                if M is not None:
                    return SatOutcome(SAT, M, {"sizes_tried": sizes_tried,
                                               "ground_depth": depth_reached})
            except CapExceeded:
                pass
        if stage <= depth_max:
            try:
                if _refute_at_depth(pf, stage, step_max):
                    return SatOutcome(UNSAT, None,
                                      {"sizes_tried": sizes_tried,
                                       "ground_depth": stage})
                depth_reached = stage
            except CapExceeded:
                pass
    return SatOutcome(UNKNOWN, None, {"sizes_tried": sizes_tried,
                                      "ground_depth": depth_reached})


# ---------------------------------------------------------------------------
# Spectra

def spectrum(pf: PrenexForm, nMax: int,
             node_cap: int = 1_000_000) -> SpectrumResult:
    if nMax < 1:
        raise ValueError("nMax must be positive")
    realizable: List[bool] = []
    witnesses: Dict[int, FiniteStructure] = {}
    for n in range(1, nMax + 1):
        M = _sat_at_size(pf, n, node_cap)
        realizable.append(M is not None)
        if M is not None:
            witnesses[n] = M
    return SpectrumResult(nMax, tuple(realizable), witnesses)


# ---------------------------------------------------------------------------
# Bounded equivalence

NCAP_NOTE = "equivalence verified up to size nCap only"


def bounded_equiv(f: PrenexForm, g: PrenexForm, nCap: int,
                  node_cap: int = 1_000_000) -> EquivResult:
    """True iff no structure of size ≤ nCap distinguishes the two sentences
    (bounded stand-in for full validity of f ↔ g, which is undecidable)."""
    if f.vocabulary != g.vocabulary:
        raise ValueError("sentences must share a vocabulary")
    for n in range(1, nCap + 1):
        for consts in _const_valuations(f.vocabulary, n):
            table = AtomTable()
            pf_prop, _ = ground_fixed_universe(f, n, const_values=consts,
                                               table=table, node_cap=node_cap)
            pg_prop, _ = ground_fixed_universe(g, n, const_values=consts,
                                               table=table, node_cap=node_cap)
            diff = p_or([p_and([pf_prop, p_not(pg_prop)]),
                         p_and([pg_prop, p_not(pf_prop)])])
            assignment = dpll_solve(tseitin(diff, table))
            if assignment is None:
                continue
            M = _model_to_structure(f, n, table, assignment, consts)
            if evaluate(M, f) == evaluate(M, g):
                raise AssertionError("difference model does not distinguish")
            return EquivResult(False, nCap, M, NCAP_NOTE)
    return EquivResult(True, nCap, None, NCAP_NOTE)


# ---------------------------------------------------------------------------
# Extensible bounded-submodel oracle

def _all_structure_models(pf: PrenexForm, n: int,
                          node_cap: int) -> Iterator[FiniteStructure]:
    """Every model of pf with universe {0..n-1}, deterministically."""
    for consts in _const_valuations(pf.vocabulary, n):
        prop, table = ground_fixed_universe(pf, n, const_values=consts,
                                            node_cap=node_cap)
        if isinstance(prop, PConst):
            if prop.value:
                for M in enumerate_structures(pf.vocabulary, n):
                    if M.constant_values == consts:
                        yield M
            continue
        cnf = tseitin(prop, table)
        atom_ids = [i for i, _ in table.items()]
        # atoms never mentioned in the grounding are true don't-cares:
        # expand them both ways so the stream is the full model set
        free_keys = [(name, args) for name, arity in pf.vocabulary.predicates
                     for args in itertools.product(range(n), repeat=arity)
                     if table.lookup((name, args)) is None]
        for assignment in all_models(cnf, atom_ids):
            for bits in itertools.product((False, True), repeat=len(free_keys)):
                interp: Dict[str, set] = {name: set()
                                          for name, _ in pf.vocabulary.predicates}
                for atom_id, (pred, args) in table.items():
                    if pred != "=" and assignment.get(atom_id, False):
                        interp[pred].add(args)
                for (pred, args), value in zip(free_keys, bits):
                    if value:
                        interp[pred].add(args)
                yield FiniteStructure(pf.vocabulary, n,
                                      {k: frozenset(v) for k, v in interp.items()},
                                      consts)


def ebs_oracle(pf: PrenexForm, sigma: Iterable[str], B: int, nMax: int,
               node_cap: int = 1_000_000,
               model_cap: int = 200_000) -> EbsVerdict:
    """Bounded refuter/confirmer for the extensible bounded-submodel
    property: for every model M of size ≤ nMax, search a core M1 of size ≤ B
    (containing the constant values) such that every extension M2 with
    M1 ⊆ M2 ⊆ M admits a completion M2′ on M2's universe that agrees with
    M2 on the σ-predicates and models pf.  Quantifier order is fixed:
    the core may depend on M but not on M2."""
    sigma = tuple(sorted(set(sigma)))
    for p in sigma:
        if not pf.vocabulary.is_predicate(p):
            raise ValueError(f"sigma mentions undeclared predicate {p!r}")
    query_cache: Dict[Tuple, bool] = {}

    def completion_query(M: FiniteStructure, s: Tuple[int, ...]) -> bool:
        # cache key built without materializing the substructure
        relabel = {e: i for i, e in enumerate(s)}
        keep = set(s)
        consts = tuple(sorted((c, relabel[v]) for c, v in M.constant_values.items()))
        sig = tuple((p, tuple(sorted(tuple(relabel[e] for e in t)
                                     for t in M.interpretation[p]
                                     if set(t) <= keep)))
                    for p in sigma)
        key = (len(s), consts, sig)
        hit = query_cache.get(key)
        if hit is not None:
            return hit
        pins: Dict[Tuple[str, Tuple[int, ...]], bool] = {}
        for p, tuples in sig:
            arity = pf.vocabulary.arity(p)
            present = set(tuples)
            for args in itertools.product(range(len(s)), repeat=arity):
                pins[(p, args)] = args in present
        prop, table = ground_fixed_universe(pf, len(s), fixed=pins,
                                            const_values=dict(consts),
                                            table=AtomTable(), node_cap=node_cap)
        ok = dpll_solve(tseitin(prop, table)) is not None
        query_cache[key] = ok
        return ok

    checked = 0
    for n in range(1, nMax + 1):
        for M in _all_structure_models(pf, n, node_cap):
            checked += 1
            if checked > model_cap:
                raise CapExceeded("oracle model cap", checked, model_cap)
            const_vals = set(M.constant_values.values())
            universe = range(M.n)
            # all candidate extensions, smallest first
            subsets = [tuple(s) for size in range(1, M.n + 1)
                       for s in itertools.combinations(universe, size)
                       if const_vals <= set(s)]
            failing = [s for s in subsets if not completion_query(M, s)]
            cores = [s for s in subsets if len(s) <= B]
            good_core = next(
                (c for c in cores
                 if not any(set(c) <= set(t) for t in failing)), None)
            if good_core is None:
                evidence = tuple(
                    (c, next(t for t in failing if set(c) <= set(t)))
                    for c in cores)
                return EbsVerdict(False, sigma, B, nMax, checked,
                                  fail_model=M,
                                  fail_extension=failing[0] if failing else None,
                                  core_evidence=evidence)
    return EbsVerdict(True, sigma, B, nMax, checked)


# ---------------------------------------------------------------------------
# Bounded B-search

@dataclass(frozen=True)
class FindBoundResult:
    B: int
    translation: "TranslationResult"  # type: ignore[name-defined]
    nCap: int
    note: str = NCAP_NOTE


def find_bound_bounded(pf: PrenexForm, bMax: int, nCap: int) -> Optional[FindBoundResult]:
    """The least B ≤ bMax whose equivalent translation is indistinguishable
    from pf on all structures of size ≤ nCap, with that translation."""
    from .translate import to_bsr_equivalent
    for B in range(bMax + 1):
        try:
            result = to_bsr_equivalent(pf, B)
        except (ValueError, CapExceeded):
            continue
        try:
            if bounded_equiv(pf, result.bsr, nCap):
                return FindBoundResult(B, result, nCap)
        except CapExceeded:
            continue
    return None


# ---------------------------------------------------------------------------
# Complexity note

def edp_nexptime_note(vocab: Vocabulary, report: BoundReport) -> Dict[str, object]:
    """Search-space figures for the bounded decision procedure: structure
    counts for each size up to max(B,1).  Report enrichment only."""
    sizes = list(range(1, max(report.B, 1) + 1))
    counts = {n: count_structures(vocab, n) for n in sizes}
    return {"B": report.B, "sizes": sizes,
            "structuresPerSize": counts, "total": sum(counts.values())}
