"""State files round-trip bit-exactly through the text grammar."""

import json

from conewalk.basecase import BaseParams, build_base_state
from conewalk.doublecone import induct_step, run_induction
from conewalk.stateio import (
    dumps_canonical,
    make_report,
    state_from_dict,
    state_to_dict,
)

BP = BaseParams(n=3, m=2, r=6, d=5, p=101)


def test_roundtrip_base_state():
    st = build_base_state(BP)
    d = state_to_dict(st)
    back = state_from_dict(json.loads(json.dumps(d)))
    assert back.f0 == st.f0
    assert back.a0 == st.a0
    assert back.a == st.a
    assert back.e == st.e
    assert back.h_poly == st.h_poly
    assert state_to_dict(back) == d


def test_roundtrip_after_steps():
    st = build_base_state(BP)
    for k in range(3):
        st = induct_step(st, seed=70 + k)
        d = state_to_dict(st)
        back = state_from_dict(json.loads(json.dumps(d)))
        assert back.defining_polynomial() == st.defining_polynomial()
        assert state_to_dict(back) == d


def test_provenance_appends():
    st = build_base_state(BP)
    n0 = len(st.provenance)
    st1 = induct_step(st, seed=1)
    assert len(st1.provenance) > n0
    assert st1.provenance[:n0] == st.provenance[:n0]


def test_dumps_deterministic():
    st = build_base_state(BP)
    assert dumps_canonical(state_to_dict(st)) == dumps_canonical(state_to_dict(st))


def test_report_shape():
    checks = [
        {"check": "a", "ref": "r", "expected": (1, True), "got": (1, True), "pass": True},
        {"check": "b", "ref": "r", "expected": 0, "got": 1, "pass": False},
    ]
    rep = make_report(checks)
    assert rep["summary"] == {"total": 2, "passed": 1, "failed": 1}
    assert rep["checks"][0]["expected"] == [1, True]


def test_roundtrip_symbolic_step_state():
    """States written after a symbolic step carry Laurent coefficients;
    the grammar must carry them losslessly."""
    st = build_base_state(BP)
    st1 = induct_step(st, j0=1, seed=3, symbolic=True)
    assert st1.a0.uses_param("lam")
    d = state_to_dict(st1)
    back = state_from_dict(json.loads(json.dumps(d)))
    assert back.a0 == st1.a0
    assert back.a == st1.a
    assert back.defining_polynomial() == st1.defining_polynomial()
