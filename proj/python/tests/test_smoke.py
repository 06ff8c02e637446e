import pytest

import liftsl2


@pytest.fixture(scope="module")
def q5():
    return liftsl2.Field(0, 5, 1, 24)


@pytest.fixture(scope="module")
def q7():
    return liftsl2.Field(0, 7, 1, 16)


def test_field_arithmetic(q5):
    six = q5.element(6)
    one = q5.element(1)
    assert (six - one).valuation() == 1
    assert q5.element(50).valuation() == 2
    assert q5.element("1/5").valuation() == -1
    assert six * six.inv() == one
    with pytest.raises(liftsl2.DivisionByZero):
        one / q5.element(0)


def test_squares(q5):
    six = q5.element(6)
    assert six.is_square()
    r = six.sqrt()
    assert r * r == six
    assert not q5.element(2).is_square()


def test_teichmuller(q7):
    w = q7.teichmuller(2, order=3)
    assert w * w * w == q7.element(1)


def test_classify(q5):
    m = q5.matrix([["u", 0], [0, "1/u"]])
    cls = m.classify()
    assert cls["kind"] == "hyperbolic"
    assert cls["length"] == 2
    bfs = m.translation_length(depth=4)
    assert bfs["length"] == 2 and bfs["determined"]


def test_tree(q5):
    v0 = q5.standard_vertex()
    m = q5.matrix([["u", 0], [0, "1/u"]])
    v2 = m.act(v0)
    assert q5.distance(v0, v2) == 2
    assert len(q5.ball(1)) == 7  # q + 1 neighbors plus the center


def test_family_no_lift(q5):
    quad = liftsl2.build_family("F1", q5)
    rep = liftsl2.verify_no_lift(quad)
    assert rep["verdict"] == "no_lift"
    assert rep["minus_count"] == 16


def test_family_over_extension(q7):
    quad = liftsl2.build_family("F3", q7)
    rep = liftsl2.verify_no_lift(quad)
    assert rep["verdict"] == "no_lift"


def test_dense(q5):
    d = liftsl2.build_dense(q5, 2, 1)
    f = q5
    alpha = f.element(d["alpha"])
    assert alpha == f.element("-11/3")
    delta = f.element(d["delta"])
    assert delta == f.element("29/3")


def test_trace_scan(q5):
    quad = liftsl2.build_family("flat", q5)
    rep = liftsl2.trace_scan(quad, 3)
    assert rep["counts"]["other"] == 0
    assert rep["total_words"] == 1 + 8 * (1 + 7 + 49)


def test_lift(q7):
    w = q7.teichmuller(2, order=3)
    g = q7.matrix([[w, 0], [0, w.inv()]])
    lifted = g.lift()
    assert lifted.order(10) == 3
    assert (-lifted).order(20) == 6
    rep = liftsl2.lift_subgroup([g])
    assert rep["kind"] == "cyclic" and rep["n"] == 3
    assert len(rep["lifts"]) == 3


def test_fixed_set_and_nesting():
    f3 = liftsl2.Field(3, 3, 1, 12)
    u = f3.matrix([[1, 1], [0, 1]])
    d = u.fixed_set(depth=6)
    assert d["kind"] == "horoball" and d["level"] == 0
    ut = f3.matrix([[1, "u"], [0, 1]])
    rep = liftsl2.nesting_check(u, ut, depth=5)
    assert rep["outcome"] == "g_subset_h"


def test_selftest_single_criterion():
    ok, text = liftsl2.selftest(criterion=6)
    assert ok, text
