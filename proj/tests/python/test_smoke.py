import os

import pytest

import needsem

SHARED = r"let x = (\y.y) (\y.y) in x"


def test_parse_normalizes():
    assert needsem.parse(r"let x = (\y.y)   (\y.y) in x", "let") == r"let x = (\y.y) \y.y in x"
    with pytest.raises(needsem.ParseError):
        needsem.parse("", "let")


def test_reduce_shared():
    r = needsem.reduce(SHARED, "let")
    assert r["outcome"] == "answer"
    assert [rule for rule, _ in r["trace"]] == ["beta_need", "deref", "assoc", "deref"]
    assert needsem.alpha_eq(r["term"], r"let y = \y.y in let x = \z.z in \w.w", "let")


def test_engines_agree_on_shared():
    nat = needsem.eval(SHARED, "let")
    inst = needsem.eval(SHARED, "let", engine="need-inst")
    assert nat["status"] == inst["status"] == "value"
    assert nat["heap"] == inst["heap"]
    assert [name.split("_")[0] for name, _ in nat["heap"]] == ["y", "x"]


def test_black_hole():
    assert needsem.eval("letrec x = x in x")["value"] == "#"
    assert needsem.eval("letrec x = x in x", engine="stuck")["status"] == "stuck_cycle"


def test_by_value_counterexample():
    src = r"letrec x = (\y.\z.y) x in x"
    assert needsem.eval(src, "value", engine="value")["value"] == "#"
    assert needsem.eval(src, "value", engine="name")["value"].startswith("\\")


def test_check_and_gen():
    programs = [needsem.gen(seed, "letrec") for seed in range(20)]
    assert programs == [needsem.gen(seed, "letrec") for seed in range(20)]
    for p in programs:
        for v in needsem.check(p, "letrec", audit=True):
            assert v["status"] != "disagree"
            assert v["violations"] == []


def test_sample_files():
    root = os.environ.get("NEEDSEM_SAMPLES", os.path.join(os.path.dirname(__file__), "..", "..", "samples"))
    with open(os.path.join(root, "chain.lam")) as f:
        r = needsem.reduce(f.read(), "letrec")
    assert r["steps"] == 6
