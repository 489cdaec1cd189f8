import itertools

import pytest

import oracles
from confluence_lab import systemf as sf
from confluence_lab.generate import (
    CorpusSpec, count_terms, diff, find_diamond_cex, find_typed_eta_diamond_cex, gen_terms,
    gen_typed_terms, not_one_step_joinable,
)
from confluence_lab.parallel import PAR
from confluence_lab.props import check_diamond
from confluence_lab.reduction import BETA, BETAETA, EMPTY, ETA, beta_reducts
from confluence_lab.terms import App, Lam, Var, free_indices, height, parse

I = Lam(Var(0))
II = App(I, I)
DUP = Lam(App(Var(0), Var(0)))
PEAK = App(DUP, II)
PAIR_CTX = sf.parse_tctx("p:Unit*Unit")


# -- untyped generation -------------------------------------------------------------


def test_gen_examples():
    assert list(gen_terms(CorpusSpec(1, 0))) == [I]
    assert list(gen_terms(CorpusSpec(0, 1))) == [Var(0)]
    assert PEAK in set(gen_terms(CorpusSpec(3, 0)))


@pytest.mark.parametrize("h", [1, 2, 3, 4])
@pytest.mark.parametrize("c", [0, 1])
def test_counts_match_independent_recurrence(h, c):
    expected = sum(oracles.count_terms_exact(k, c) for k in range(h + 1))
    assert count_terms(h, c) == expected
    if (h, c) != (4, 1):
        assert sum(1 for _ in gen_terms(CorpusSpec(h, c))) == expected


def test_frozen_counts():
    # values computed by the independent recurrence, frozen here
    assert [count_terms(h, 0) for h in range(1, 5)] == [1, 5, 51, 3377]
    assert [count_terms(h, 1) for h in range(1, 5)] == [4, 26, 776, 612264]


def test_generated_terms_are_sound_and_distinct():
    for h, c in [(3, 0), (3, 1), (2, 2)]:
        ts = list(gen_terms(CorpusSpec(h, c)))
        assert len(set(ts)) == len(ts)
        for t in ts:
            assert height(t) <= h
            assert all(i < c for i in free_indices(t))


def test_generation_is_height_major():
    hs = [height(t) for t in gen_terms(CorpusSpec(3, 1))]
    assert hs == sorted(hs)


def test_generation_is_deterministic():
    assert list(gen_terms(CorpusSpec(3, 1))) == list(gen_terms(CorpusSpec(3, 1)))


def test_corpus_spec_validation():
    with pytest.raises(ValueError):
        CorpusSpec(-1)
    with pytest.raises(ValueError):
        CorpusSpec(2, calculus="lisp")


# -- diff --------------------------------------------------------------------------------


def test_diff_examples():
    assert diff(I, I) is None
    w = diff(I, App(Var(0), Var(0)))
    assert w.path == () and w.kind == "lam-vs-app"
    w = diff(Var(0), Var(1))
    assert w.path == () and w.kind == "var-index"


def test_diff_prefers_function_side():
    w = diff(App(Var(0), Var(0)), App(Var(1), Var(1)))
    assert w.path == ("fun",)


def test_diff_correctness_and_replay():
    ts = list(gen_terms(CorpusSpec(2, 1)))
    for m, n in itertools.product(ts, ts):
        w = diff(m, n)
        assert (w is None) == (m == n)
        if w is not None:
            a, b = w.follow(m), w.follow(n)
            assert a != b
            assert type(a) is not type(b) or (isinstance(a, Var) and a.index != b.index)


def test_diff_on_typed_terms():
    a = sf.TmLam(sf.Unit(), sf.TmVar(0))
    b = sf.TmLam(sf.Prod(sf.Unit(), sf.Unit()), sf.TmVar(0))
    w = diff(a, b)
    assert w.path == ("annot",) and w.kind == "unit-vs-prod"


# -- one-step non-joinability -------------------------------------------------------------


def test_not_one_step_joinable_examples():
    assert not_one_step_joinable(App(II, II), App(DUP, I), BETA)
    assert not not_one_step_joinable(PEAK, PEAK, BETA)
    assert not not_one_step_joinable(App(I, Var(0)), Var(0), BETA)


def test_not_one_step_joinable_witness_reducts():
    left, right = set(beta_reducts(App(II, II))), set(beta_reducts(App(DUP, I)))
    assert left == {App(I, II), App(II, I)}
    assert right == {II}


# -- counterexample search -------------------------------------------------------------------


def test_find_diamond_cex_examples():
    cx = find_diamond_cex(BETA, CorpusSpec(3, 0))
    assert (cx.peak, cx.left, cx.right) == (PEAK, App(II, II), App(DUP, I))
    assert cx.peak == parse(r"(\x. x x) ((\y. y) (\y. y))")
    assert find_diamond_cex(BETA, CorpusSpec(1, 0)) is None
    assert find_diamond_cex(PAR, CorpusSpec(3, 0)) is None
    assert find_diamond_cex(EMPTY, CorpusSpec(3, 0)) is None


def test_find_diamond_cex_is_first_in_corpus_order():
    ts = list(gen_terms(CorpusSpec(3, 0)))
    cx = find_diamond_cex(BETA, ts)
    earlier = ts[:ts.index(cx.peak)]
    assert find_diamond_cex(BETA, earlier) is None


@pytest.mark.parametrize("threads", [0, 1, 3])
def test_search_is_independent_of_thread_count(threads):
    base = find_diamond_cex(BETA, CorpusSpec(3, 1), threads=0)
    assert find_diamond_cex(BETA, CorpusSpec(3, 1), threads=threads) == base


@pytest.mark.parametrize("rel", [BETA, ETA, BETAETA, PAR], ids=lambda r: r.name)
@pytest.mark.parametrize("c", [0, 1])
def test_search_agrees_with_checker(rel, c):
    spec = CorpusSpec(3, c)
    cx = find_diamond_cex(rel, spec)
    report = check_diamond(rel, spec)
    assert (cx is None) == report.passed
    if cx is not None:
        assert report.counterexample.peak == cx.peak


# -- typed generation ---------------------------------------------------------------------------


def test_typed_gen_examples():
    ctx = sf.parse_tctx("b")
    b = sf.TVar(0)
    spec = CorpusSpec(1, calculus="systemf", context=ctx, target_type=sf.Arr(b, b))
    assert sf.TmLam(b, sf.TmVar(0)) in [t for t, _ in gen_typed_terms(spec)]
    spec = CorpusSpec(3, calculus="eta-ext", context=PAIR_CTX)
    peak = sf.TmPair(sf.TmFst(sf.TmVar(0)), sf.TmSnd(sf.TmVar(0)))
    assert any(t == peak for t, _ in gen_typed_terms(spec))
    spec = CorpusSpec(1, calculus="eta-ext", target_type=sf.Unit())
    assert sf.TmUnit() in [t for t, _ in gen_typed_terms(spec)]


def test_typed_gen_is_sound_and_distinct():
    for calculus, ctx in [("systemf", sf.parse_tctx("b, z:b")), ("eta-ext", PAIR_CTX),
                          ("simply-typed", sf.parse_tctx("b, f:b->b"))]:
        pairs = list(gen_typed_terms(CorpusSpec(2, calculus=calculus, context=ctx)))
        terms = [t for t, _ in pairs]
        assert len(set(terms)) == len(terms)
        for t, ty in pairs:
            assert sf.typecheck(ctx, t) == ty
            assert sf.tm_height(t) <= 2


def test_typed_gen_respects_target():
    ctx = sf.parse_tctx("b, z:b")
    target = sf.TVar(0)
    spec = CorpusSpec(2, calculus="systemf", context=ctx, target_type=target)
    assert all(ty == target for _, ty in gen_typed_terms(spec))


def test_typed_gen_needs_typed_spec():
    with pytest.raises(ValueError):
        list(gen_typed_terms(CorpusSpec(2)))


def test_typed_eta_cex():
    cx = find_typed_eta_diamond_cex(CorpusSpec(3, calculus="eta-ext", context=PAIR_CTX))
    v = sf.TmVar(0)
    assert cx.peak == sf.TmPair(sf.TmFst(v), sf.TmSnd(v))
    assert cx.left == v
    assert cx.right == sf.TmPair(sf.TmUnit(), sf.TmSnd(v))


def test_typed_eta_cex_branches_really_diverge():
    rel = sf.typed_relation("typed-eta-ext", PAIR_CTX)
    v = sf.TmVar(0)
    assert rel(v) == ()
    right = sf.TmPair(sf.TmUnit(), sf.TmSnd(v))
    assert rel(right) == (sf.TmPair(sf.TmUnit(), sf.TmUnit()),)


def test_typed_eta_cex_none_at_bound_one():
    assert find_typed_eta_diamond_cex(CorpusSpec(1, calculus="eta-ext", context=PAIR_CTX)) is None


def test_function_eta_fragment_has_no_cex():
    spec = CorpusSpec(3, calculus="simply-typed", context=sf.parse_tctx("b, f:b->b"))
    assert find_typed_eta_diamond_cex(spec, ("fun",)) is None
