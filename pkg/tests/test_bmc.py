import pytest

from ebsedp.analysis import SAT, UNSAT, decide_sat_bounded
from ebsedp.bmc import (NEXT_SUFFIX, TransitionSystem, bmc_solve, unroll_bmc,
                        unroll_ind)
from ebsedp.parse import parse_problem
from ebsedp.structures import evaluate
from ebsedp.syntax import Atom, Exists, Forall, Not, Var, Vocabulary, free_vars, to_pcnf

VOC = Vocabulary((("Q", 1), ("P", 2)))

DEMO = """\
vocab Q/1, P/2;
@statevars x;
@init Q(x);
@trans P(x, x_next);
@prop !Q(x);
"""


def demo_ts():
    return TransitionSystem.from_problem(parse_problem(DEMO))


def test_from_problem():
    ts = demo_ts()
    assert ts.state_vars == ("x",)
    assert ts.d == 1
    assert ts.init == Atom("Q", (Var("x"),))
    assert ts.trans == Atom("P", (Var("x"), Var("x" + NEXT_SUFFIX)))
    assert ts.prop == Not(Atom("Q", (Var("x"),)))


def test_from_problem_missing_directive():
    p = parse_problem("vocab Q/1;\n@statevars x;\n@init Q(x);\n@prop Q(x);\n",
                      require_formula=False)
    with pytest.raises(ValueError):
        TransitionSystem.from_problem(p)


def test_validation_of_free_variables():
    with pytest.raises(ValueError):
        TransitionSystem(VOC, ("x",), Atom("Q", (Var("y"),)),
                         Atom("P", (Var("x"), Var("x_next"))),
                         Atom("Q", (Var("x"),)))
    with pytest.raises(ValueError):
        # init must not mention the primed copy
        TransitionSystem(VOC, ("x",), Atom("Q", (Var("x_next"),)),
                         Atom("P", (Var("x"), Var("x_next"))),
                         Atom("Q", (Var("x"),)))
    with pytest.raises(ValueError):
        TransitionSystem(VOC, (), Atom("Q", (Var("x"),)),
                         Atom("Q", (Var("x"),)), Atom("Q", (Var("x"),)))
    with pytest.raises(ValueError):
        TransitionSystem(VOC, ("x", "x"), Atom("Q", (Var("x"),)),
                         Atom("Q", (Var("x"),)), Atom("Q", (Var("x"),)))


def test_unroll_bmc_shapes():
    ts = demo_ts()
    f0 = unroll_bmc(ts, 0)
    assert free_vars(f0) == set()
    pf0 = to_pcnf(f0, VOC)
    assert [v for _, v in pf0.prefix] == ["s0_1"]
    f2 = unroll_bmc(ts, 2)
    pf2 = to_pcnf(f2, VOC)
    assert [v for _, v in pf2.prefix] == ["s0_1", "s1_1", "s2_1"]
    assert all(q == "exists" for q, _ in pf2.prefix)
    with pytest.raises(ValueError):
        unroll_bmc(ts, -1)


def test_unroll_multi_component_state():
    src = ("vocab P/2;\n@statevars x, y;\n@init P(x, y);\n"
           "@trans P(x_next, y_next);\n@prop P(y, x);\n")
    ts = TransitionSystem.from_problem(parse_problem(src))
    pf = to_pcnf(unroll_bmc(ts, 1), ts.vocabulary)
    assert [v for _, v in pf.prefix] == ["s0_1", "s0_2", "s1_1", "s1_2"]


def test_unroll_ind_shape():
    ts = demo_ts()
    with pytest.raises(ValueError):
        unroll_ind(ts, 0)
    pf = to_pcnf(unroll_ind(ts, 1), VOC)
    assert [v for _, v in pf.prefix] == ["s0_1", "s1_1"]


def test_bmc_solve_demo():
    # reaching an unmarked state from a marked one needs at least one step
    ts = demo_ts()
    out0, report0, _ = bmc_solve(ts, 0)
    assert out0.verdict == UNSAT
    assert report0.B == 3  # m + |V| + |EUbar| + 2^k = 0 + 1 + 1 + 1
    out1, report1, pf1 = bmc_solve(ts, 1)
    assert out1.verdict == SAT
    assert report1.B == 4
    assert evaluate(out1.model, pf1)
    assert out1.model.n == 2  # needs a marked and an unmarked element


def test_bmc_bound_affine_in_k():
    ts = demo_ts()
    bounds = [bmc_solve(ts, k)[1].B for k in range(4)]
    assert bounds == [3, 4, 5, 6]  # slope 1: one fresh step variable per step


def test_bmc_trace_witnesses_property():
    ts = demo_ts()
    out, _, _ = bmc_solve(ts, 2)
    assert out.verdict == SAT
    M = out.model
    # a state path q0 -> q1 -> q2 with Q(q0) and !Q(q2) exists in the model
    univ = range(M.n)
    assert any(M.holds("Q", (a,)) and M.holds("P", (a, b))
               and M.holds("P", (b, c)) and not M.holds("Q", (c,))
               for a in univ for b in univ for c in univ)


def test_bmc_solve_rejects_out_of_fragment():
    # a transition relation with opposite-polarity steps of the existential
    # predicate breaks distinguishability after two steps
    src = ("vocab Q/1, P/2;\n@statevars x;\n@init Q(x);\n"
           "@trans P(x, x_next) & !P(x_next, x);\n@prop !Q(x);\n")
    ts = TransitionSystem.from_problem(parse_problem(src))
    out, report, _ = bmc_solve(ts, 1)  # one step is still inside
    assert out.verdict in (SAT, UNSAT)
    # the unrolled sentence stays a sentence either way
    pf = to_pcnf(unroll_bmc(ts, 2), ts.vocabulary)
    assert pf.is_sentence()


def test_bmc_unsafe_property_stays_unsat():
    # property equal to the initial condition: reachable at k=0
    src = ("vocab Q/1, P/2;\n@statevars x;\n@init Q(x);\n"
           "@trans P(x, x_next);\n@prop Q(x);\n")
    ts = TransitionSystem.from_problem(parse_problem(src))
    out, _, _ = bmc_solve(ts, 0)
    assert out.verdict == SAT
