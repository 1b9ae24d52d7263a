"""Propositional engine: fixed-universe grounding, Tseitin conversion, DPLL,
model enumeration, Herbrand-style BSR grounding, and DIMACS export."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import engine
from .errors import CapExceeded
from .syntax import EXISTS, FORALL, Atom, Const, Eq, PrenexForm, Term, Var

DEFAULT_NODE_CAP = 1_000_000
DEFAULT_CLAUSE_CAP = 1_000_000

GroundCnf = List[List[int]]
AtomKey = Tuple[str, Tuple]  # (predicate or "=", argument tuple)


class AtomTable:
    """Bidirectional ground-atom <-> id registry; ids dense from 1."""

    def __init__(self):
        self._by_key: Dict[AtomKey, int] = {}
        self._by_id: List[AtomKey] = []

    def id_of(self, key: AtomKey) -> int:
        got = self._by_key.get(key)
        if got is None:
            self._by_id.append(key)
            got = len(self._by_id)
            self._by_key[key] = got
        return got

    def lookup(self, key: AtomKey) -> Optional[int]:
        return self._by_key.get(key)

    def key_of(self, atom_id: int) -> AtomKey:
        return self._by_id[atom_id - 1]

    def name_of(self, atom_id: int) -> str:
        pred, args = self.key_of(atom_id)
        if pred == "=":
            return f"{args[0]}={args[1]}"
        return f"{pred}({','.join(str(a) for a in args)})"

    def __len__(self) -> int:
        return len(self._by_id)

    def items(self) -> Iterator[Tuple[int, AtomKey]]:
        for i, key in enumerate(self._by_id, start=1):
            yield i, key


# ---------------------------------------------------------------------------
# Propositional formulas

@dataclass(frozen=True)
class PropFormula:
    pass


@dataclass(frozen=True)
class PConst(PropFormula):
    value: bool


@dataclass(frozen=True)
class PLit(PropFormula):
    lit: int  # signed atom id, never 0


@dataclass(frozen=True)
class PNot(PropFormula):
    sub: PropFormula


@dataclass(frozen=True)
class PAnd(PropFormula):
    args: Tuple[PropFormula, ...]


@dataclass(frozen=True)
class POr(PropFormula):
    args: Tuple[PropFormula, ...]


def p_and(parts: Iterable[PropFormula]) -> PropFormula:
    out = []
    for p in parts:
        if isinstance(p, PConst):
            if not p.value:
                return PConst(False)
        else:
            out.append(p)
    if not out:
        return PConst(True)
    return out[0] if len(out) == 1 else PAnd(tuple(out))


def p_or(parts: Iterable[PropFormula]) -> PropFormula:
    out = []
    for p in parts:
        if isinstance(p, PConst):
            if p.value:
                return PConst(True)
        else:
            out.append(p)
    if not out:
        return PConst(False)
    return out[0] if len(out) == 1 else POr(tuple(out))


def p_not(p: PropFormula) -> PropFormula:
    if isinstance(p, PConst):
        return PConst(not p.value)
    if isinstance(p, PLit):
        return PLit(-p.lit)
    if isinstance(p, PNot):
        return p.sub
    return PNot(p)


# ---------------------------------------------------------------------------
# Fixed-universe grounding

def ground_fixed_universe(pf: PrenexForm, n: int,
                          fixed: Optional[Mapping[Tuple[str, Tuple[int, ...]], bool]] = None,
                          const_values: Optional[Mapping[str, int]] = None,
                          table: Optional[AtomTable] = None,
                          node_cap: int = DEFAULT_NODE_CAP) -> Tuple[PropFormula, AtomTable]:
    """Expand a PCNF sentence over the universe {0..n-1}: ∀ to conjunction,
    ∃ to disjunction.  Ground equalities between concrete elements evaluate
    at grounding time; atoms pinned by `fixed` become constants.  Constant
    symbols require concrete values via const_values."""
    if n < 1:
        raise ValueError("universe must be nonempty")
    if not pf.is_sentence():
        raise ValueError("grounding requires a sentence")
    const_values = dict(const_values or {})
    missing = [c for c in pf.vocabulary.constants if c not in const_values]
    if missing:
        raise ValueError(f"no value for constant(s) {missing}")
    fixed = dict(fixed or {})
    if table is None:
        table = AtomTable()
    budget = [node_cap]

    def charge(k: int = 1) -> None:
        budget[0] -= k
        if budget[0] < 0:
            raise CapExceeded("grounding node cap", node_cap - budget[0], node_cap)

    def term_value(t: Term, a: Dict[str, int]) -> int:
        return a[t.name] if isinstance(t, Var) else const_values[t.name]

    def ground_matrix(a: Dict[str, int]) -> PropFormula:
        clauses = []
        for clause in pf.matrix:
            lits = []
            for lit in clause:
                atom = lit.atom
                if isinstance(atom, Eq):
                    value = term_value(atom.left, a) == term_value(atom.right, a)
                    lits.append(PConst(value == lit.positive))
                else:
                    args = tuple(term_value(t, a) for t in atom.args)
                    pin = fixed.get((atom.predicate, args))
                    if pin is not None:
                        lits.append(PConst(pin == lit.positive))
                    else:
                        aid = table.id_of((atom.predicate, args))
                        lits.append(PLit(aid if lit.positive else -aid))
                charge()
            clauses.append(p_or(lits))
        return p_and(clauses)

    def expand(i: int, a: Dict[str, int]) -> PropFormula:
        if i == len(pf.prefix):
            return ground_matrix(a)
        q, v = pf.prefix[i]
        parts = []
        for e in range(n):
            a[v] = e
            part = expand(i + 1, a)
            charge()
            parts.append(part)
            # prune on dominating constants
            if q == FORALL and part == PConst(False):
                break
            if q == EXISTS and part == PConst(True):
                break
        del a[v]
        return p_and(parts) if q == FORALL else p_or(parts)

    return expand(0, {}), table


# ---------------------------------------------------------------------------
# Tseitin

def tseitin(p: PropFormula, table: Optional[AtomTable] = None) -> GroundCnf:
    """Equisatisfiable CNF; a model restricted to original atoms models p.
    Auxiliary variables are numbered after the table's atoms (or after the
    largest mentioned atom when no table is given)."""
    if isinstance(p, PConst):
        return [] if p.value else [[]]
    if table is not None:
        next_aux = [len(table) + 1]
    else:
        next_aux = [_max_atom(p) + 1]
    clauses: GroundCnf = []

    def encode(node: PropFormula) -> int:
        if isinstance(node, PLit):
            return node.lit
        if isinstance(node, PNot):
            return -encode(node.sub)
        if isinstance(node, PConst):
            # constants are folded away by p_and/p_or; a raw one gets a pinned aux
            t = next_aux[0]
            next_aux[0] += 1
            clauses.append([t] if node.value else [-t])
            return t if node.value else -t
        sub = [encode(a) for a in node.args]
        t = next_aux[0]
        next_aux[0] += 1
        if isinstance(node, PAnd):
            for s in sub:
                clauses.append([-t, s])
            clauses.append([t] + [-s for s in sub])
        else:
            clauses.append([-t] + sub)
            for s in sub:
                clauses.append([-s, t])
        return t

    root = encode(p)
    clauses.append([root])
    return clauses


def _max_atom(p: PropFormula) -> int:
    if isinstance(p, PLit):
        return abs(p.lit)
    if isinstance(p, PNot):
        return _max_atom(p.sub)
    if isinstance(p, (PAnd, POr)):
        return max(_max_atom(a) for a in p.args)
    return 0


# ---------------------------------------------------------------------------
# Solving and model enumeration

def dpll_solve(cnf: Sequence[Sequence[int]]) -> Optional[Dict[int, bool]]:
    """SAT: total assignment over mentioned atoms; UNSAT: None."""
    return engine.solve(cnf)


def all_models(cnf: Sequence[Sequence[int]],
               projection: Iterable[int]) -> Iterator[Dict[int, bool]]:
    """Every satisfying assignment restricted to projection, exactly once.

    Deterministic depth-first enumeration over the projection variables in
    ascending order (false branch first), with a DPLL call on the residual
    clauses at each leaf; equivalent to blocking-clause enumeration but
    without the quadratic clause growth.
    """
    proj = sorted(set(projection))
    assign: Dict[int, bool] = {}

    def residual_ok() -> Optional[List[List[int]]]:
        rest: List[List[int]] = []
        for clause in cnf:
            keep = []
            satisfied = False
            for lit in clause:
                val = assign.get(abs(lit))
                if val is None:
                    keep.append(lit)
                elif (lit > 0) == val:
                    satisfied = True
                    break
            if satisfied:
                continue
            if not keep:
                return None
            rest.append(keep)
        return rest

    def rec(i: int) -> Iterator[Dict[int, bool]]:
        rest = residual_ok()
        if rest is None:
            return
        if i == len(proj):
            if engine.solve(rest) is not None:
                yield dict(assign)
            return
        v = proj[i]
        for value in (False, True):
            assign[v] = value
            yield from rec(i + 1)
        del assign[v]

    yield from rec(0)


# ---------------------------------------------------------------------------
# BSR (∃*∀*) grounding with equality axioms

def bsr_ground(pf: PrenexForm,
               clause_cap: int = DEFAULT_CLAUSE_CAP) -> Tuple[GroundCnf, AtomTable]:
    """Ground an ∃*∀* sentence over a constant universe: existentials become
    fresh constants, universals range over all constants, and constant-level
    equality atoms are axiomatized (symmetry/reflexivity by normalization,
    plus transitivity and per-predicate congruence).  Equisatisfiable."""
    if not pf.is_bsr():
        raise ValueError("prefix is not in the shape exists*forall*")
    if not pf.is_sentence():
        raise ValueError("bsr_ground requires a sentence")
    exist_vars = [v for q, v in pf.prefix if q == EXISTS]
    univ_vars = [v for q, v in pf.prefix if q == FORALL]
    domain: List[str] = list(pf.vocabulary.constants)
    var_const: Dict[str, str] = {}
    for v in exist_vars:
        name = f"c_{v}"
        while name in domain:
            name += "_"
        var_const[v] = name
        domain.append(name)
    if not domain:
        domain.append("c_0")

    table = AtomTable()
    cnf: GroundCnf = []
    uses_eq = any(isinstance(lit.atom, Eq) for clause in pf.matrix for lit in clause)

    def charge():
        if len(cnf) > clause_cap:
            raise CapExceeded("BSR grounding clause cap", len(cnf), clause_cap)

    def term_name(t: Term, a: Dict[str, str]) -> str:
        if isinstance(t, Const):
            return t.name
        return a.get(t.name) or var_const[t.name]

    def eq_lit(a: str, b: str) -> Optional[int]:
        if a == b:
            return None  # reflexivity: true
        return table.id_of(("=", tuple(sorted((a, b)))))

    for values in itertools.product(domain, repeat=len(univ_vars)):
        a = dict(zip(univ_vars, values))
        for clause in pf.matrix:
            out: List[int] = []
            satisfied = False
            for lit in clause:
                atom = lit.atom
                if isinstance(atom, Eq):
                    na, nb = term_name(atom.left, a), term_name(atom.right, a)
                    e = eq_lit(na, nb)
                    if e is None:
                        if lit.positive:
                            satisfied = True
                            break
                        continue  # a trivially-false literal drops out
                    out.append(e if lit.positive else -e)
                else:
                    args = tuple(term_name(t, a) for t in atom.args)
                    aid = table.id_of((atom.predicate, args))
                    out.append(aid if lit.positive else -aid)
            if not satisfied:
                cnf.append(out)
                charge()

    if uses_eq:
        # transitivity over the constant universe
        for x, y, z in itertools.permutations(domain, 3):
            ab, bc, ac = eq_lit(x, y), eq_lit(y, z), eq_lit(x, z)
            cnf.append([-ab, -bc, ac])
            charge()
        # congruence for predicates that occur in the matrix
        used_preds = sorted({lit.atom.predicate
                             for clause in pf.matrix for lit in clause
                             if isinstance(lit.atom, Atom) and lit.atom.args})
        for pred in used_preds:
            arity = pf.vocabulary.arity(pred)
            for t in itertools.product(domain, repeat=arity):
                for u in itertools.product(domain, repeat=arity):
                    if t == u:
                        continue
                    body = []
                    for ta, ua in zip(t, u):
                        e = eq_lit(ta, ua)
                        if e is not None:
                            body.append(-e)
                    pa = table.id_of((pred, t))
                    pb = table.id_of((pred, u))
                    cnf.append(body + [-pa, pb])
                    charge()
    return cnf, table


# ---------------------------------------------------------------------------
# DIMACS

def export_dimacs(cnf: Sequence[Sequence[int]], table: Optional[AtomTable] = None) -> str:
    nvars = max((abs(l) for clause in cnf for l in clause), default=0)
    lines = []
    if table is not None:
        for atom_id, _ in table.items():
            if atom_id <= nvars:
                lines.append(f"c {atom_id} {table.name_of(atom_id)}")
    lines.append(f"p cnf {nvars} {len(cnf)}")
    for clause in cnf:
        lines.append(" ".join(str(l) for l in clause) + " 0" if clause else "0")
    return "\n".join(lines) + "\n"
