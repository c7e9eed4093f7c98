import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cspoly.cs_core import is_cs
from cspoly.dioph6 import solve_q
from cspoly.errors import BudgetExceededError, CheckpointError, CsPolyError
from cspoly.families import brute_force_enumerate, catalog, instantiate
from cspoly.finite_field import first_primes, is_k_regular_mod_p, reduce_mod_p
from cspoly.intpoly import IntPoly
from cspoly.searcher import (
    Checkpoint,
    SearchSpec,
    box_search,
    modp_disproof,
    partition,
    pruned_volume_bound,
    quick_disproof_k,
)

P = IntPoly.from_desc
OCTIC = P([1, -2, -3, 3, -5, 6, -4, 4, 1])
DEG7 = ("c1+c6=0", "c2+c5=0")


def doubly_monic(min_deg=4, max_deg=8, lo=-5, hi=5):
    return st.integers(min_deg, max_deg).flatmap(
        lambda n: st.lists(st.integers(lo, hi), min_size=n - 1, max_size=n - 1).map(
            lambda c: IntPoly(((-1) ** n,) + tuple(c) + (1,))
        )
    )


# ------------------------------------------------------------ spec and partition

def test_spec_validation():
    with pytest.raises(CsPolyError):
        SearchSpec(1, [])
    with pytest.raises(CsPolyError):
        SearchSpec(4, [(-1, 1)] * 2)
    with pytest.raises(CsPolyError):
        SearchSpec.cube(4, -1, 1, primes=(4,))
    with pytest.raises(CsPolyError):
        SearchSpec.cube(4, -1, 1, primes=())
    with pytest.raises(CsPolyError):
        SearchSpec.cube(4, -1, 1, checkpoint_interval=0)
    with pytest.raises(CsPolyError):
        SearchSpec.cube(7, -1, 1, constraints=("c1+c6",))
    with pytest.raises(CsPolyError):
        SearchSpec.cube(7, -1, 1, constraints=("c1*c6=0",))
    with pytest.raises(CsPolyError):
        SearchSpec.cube(7, -1, 1, constraints=("c1=0", "c1=1"))


def test_spec_hash_is_stable():
    a = SearchSpec.cube(6, -2, 2)
    b = SearchSpec.cube(6, -2, 2, checkpoint_interval=5)
    assert a.spec_hash() == b.spec_hash()
    assert a.spec_hash() != SearchSpec.cube(6, -2, 3).spec_hash()
    assert len(a.primes) == 25 and a.primes[-1] == 97


@pytest.mark.parametrize("side,workers", [(5, 1), (5, 2), (5, 5), (5, 8), (13, 4), (1, 3)])
def test_partition_covers_box(side, workers):
    spec = SearchSpec.cube(5, 0, side - 1)
    parts = partition(spec, workers)
    assert len(parts) == workers
    values = []
    sizes = []
    for b in parts:
        assert b[:-1] == spec.bounds[:-1]
        lo, hi = b[-1]
        sizes.append(max(0, hi - lo + 1))
        values += list(range(lo, hi + 1))
    assert values == list(range(side))
    assert max(sizes) - min(sizes) <= 1
    with pytest.raises(CsPolyError):
        partition(spec, 0)


def test_pruned_volume():
    assert pruned_volume_bound(SearchSpec.cube(8, -2, 2)) == 5**7
    assert pruned_volume_bound(SearchSpec.cube(7, -4, 4, constraints=DEG7)) == 9**4


# ------------------------------------------------------------ filters

def test_modp_disproof_examples():
    d = modp_disproof(P([1, 0, 0, 0, -1, -1]), [2])
    assert (d.p, d.k) == (2, 2) and len(d.indices) == 2
    assert modp_disproof(P([1, 0, 0, 0, -1, -1]), [3, 2]).p in (2, 3)
    with pytest.raises(CsPolyError):
        modp_disproof(P([1, -1, 1]), [2])
    with pytest.raises(CsPolyError):
        modp_disproof(P([1, 0, 0, 0, 2]), [2])
    # a CS polynomial is never disproved
    assert modp_disproof(instantiate(catalog(5)[0], {"a": 2}), first_primes(10)) is None


@pytest.mark.slow
def test_modp_disproof_octic_large_prime():
    d = modp_disproof(OCTIC, [5525329])
    assert d is not None and d.k == 4


def test_quick_filter_examples():
    # x^5 - x - 1 = (x^2+x+1)(x^3+x^2+1) mod 2; the quadratic has root product 1
    assert quick_disproof_k(P([1, 0, 0, 0, -1, -1]).coeffs, 2) == 2
    assert quick_disproof_k((1, 0, 0, 0, 1), 2) == 1  # x^4 + 1 = (x + 1)^4 mod 2
    with pytest.raises(CsPolyError):
        quick_disproof_k((1, 1, 2), 5)


@settings(max_examples=150, deadline=None)
@given(doubly_monic(), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_quick_filter_is_sound(f, p):
    k = quick_disproof_k(f.coeffs, p)
    if k is not None:
        assert not is_k_regular_mod_p(reduce_mod_p(f, p), k)
        assert not is_cs(f)


@settings(max_examples=60, deadline=None)
@given(doubly_monic(4, 7))
def test_modp_disproof_is_sound(f):
    d = modp_disproof(f, [2, 3, 5])
    if d is not None:
        assert not is_k_regular_mod_p(reduce_mod_p(f, d.p), d.k)
        assert not is_cs(f)


# ------------------------------------------------------------ searches

def test_degree5_search_matches_brute_force():
    rep = box_search(SearchSpec.cube(5, -4, 4), audit_every=1)
    assert list(rep.survivors) == brute_force_enumerate(5, (-4, 4))
    assert rep.scanned == 9**4
    assert rep.candidates == rep.filtered + rep.filter_passed
    assert rep.audited == rep.filtered
    assert len(rep.rejected) + len(rep.survivors) == rep.filter_passed


def test_degree4_search_matches_brute_force():
    rep = box_search(SearchSpec.cube(4, -6, 6))
    assert list(rep.survivors) == brute_force_enumerate(4, (-6, 6))


def test_workers_do_not_change_the_report():
    spec = SearchSpec.cube(6, -2, 2)
    one = box_search(spec, workers=1)
    two = box_search(spec, workers=2)
    assert one.to_json(timing=False) == two.to_json(timing=False)


def test_degree7_constrained_search():
    spec = SearchSpec.cube(7, -4, 4, constraints=DEG7)
    rep = box_search(spec)
    got = set(rep.survivors)
    assert all(f[1] + f[6] == 0 and f[2] + f[5] == 0 for f in got)
    assert all(is_cs(f) for f in got)
    want = set()
    for fam in catalog(7):
        for a in range(-20, 21):
            f = instantiate(fam, {"a": a})
            if all(-4 <= f[i] <= 4 for i in range(1, 7)):
                want.add(f)
    assert want and want <= got
    # direct scan of the constrained box
    direct = set()
    for c1 in range(-4, 5):
        for c2 in range(-4, 5):
            for c3 in range(-4, 5):
                for e in (1, -1):
                    c4 = e - c3
                    if -4 <= c4 <= 4:
                        f = IntPoly((-1, c1, c2, c3, c4, -c2, -c1, 1))
                        if is_cs(f):
                            direct.add(f)
    assert got == direct


@pytest.mark.slow
def test_degree6_search_matches_solver():
    rep = box_search(SearchSpec.cube(6, -5, 5), workers=2)
    want = set()
    for q in range(0, 11):
        for r in solve_q(q):
            fs = [r.instantiate(a) for a in range(-30, 31)] if r.parametric else [r.poly()]
            want |= {f for f in fs if all(-5 <= f[i] <= 5 for i in range(1, 6))}
    # the solver covers q >= 0; the signed reciprocal flips the sign of q
    from cspoly.intpoly import signed_reciprocal
    want |= {signed_reciprocal(f) for f in want}
    assert set(rep.survivors) == want


def test_budget_refusal():
    with pytest.raises(BudgetExceededError) as exc:
        box_search(SearchSpec.cube(8, -6, 6), budget=10**6)
    assert exc.value.volume == 13**7


def test_report_shape():
    rep = box_search(SearchSpec.cube(4, -2, 2))
    doc = json.loads(rep.to_json())
    assert doc["version"] == "cspoly.search/1"
    assert set(doc["filter"]["kills"]) == {str(p) for p in rep.spec.primes}
    assert "timing" in doc and "timing" not in json.loads(rep.to_json(timing=False))
    assert rep.survivors_csv().splitlines()[0] == "c0,c1,c2,c3,c4"
    assert len(rep.survivors_csv().splitlines()) == len(rep.survivors) + 1


# ------------------------------------------------------------ checkpoints

def _lines(path):
    return path.read_text().splitlines(keepends=True)


def test_checkpoint_resume_matches_full_run(tmp_path):
    spec = SearchSpec.cube(5, -3, 3)
    full = box_search(spec)
    cp = tmp_path / "run.ckpt"
    box_search(spec, checkpoint=str(cp))
    lines = _lines(cp)
    assert len(lines) == 1 + 7
    # keep three finished slices and half of the fourth record
    cp.write_text("".join(lines[:4]) + lines[4][:20])
    loaded = Checkpoint.load(str(cp))
    assert sorted(loaded.completed) == [0, 1, 2] and loaded.last_index == 2
    resumed = box_search(spec, checkpoint=str(cp), resume=True)
    assert resumed.resumed_slices == 3
    assert resumed.to_json(timing=False) == full.to_json(timing=False)
    assert Checkpoint.load(str(cp)).completed.keys() == set(range(7))


def test_checkpoint_refuses_overwrite_and_mismatch(tmp_path):
    spec = SearchSpec.cube(4, -2, 2)
    cp = tmp_path / "a.ckpt"
    box_search(spec, checkpoint=str(cp))
    with pytest.raises(CheckpointError):
        box_search(spec, checkpoint=str(cp))
    with pytest.raises(CheckpointError):
        box_search(SearchSpec.cube(4, -2, 3), checkpoint=str(cp), resume=True)
    # resuming a finished run redoes nothing
    rep = box_search(spec, checkpoint=str(cp), resume=True)
    assert rep.resumed_slices == 5


@pytest.mark.parametrize("damage", ["checksum", "header", "duplicate", "garbage", "empty"])
def test_checkpoint_corruption_is_detected(tmp_path, damage):
    spec = SearchSpec.cube(4, -2, 2)
    cp = tmp_path / "c.ckpt"
    box_search(spec, checkpoint=str(cp))
    lines = _lines(cp)
    if damage == "checksum":
        body = lines[1].replace('"scanned":', '"scanned": ')
        lines[1] = body
    elif damage == "header":
        lines[0] = "not-a-checkpoint x\n"
    elif damage == "duplicate":
        lines.append(lines[1])
    elif damage == "garbage":
        lines.insert(2, "hello world\n")
    else:
        lines = []
    cp.write_text("".join(lines))
    with pytest.raises(CheckpointError):
        box_search(spec, checkpoint=str(cp), resume=True)


def test_checkpoint_interval(tmp_path):
    spec = SearchSpec.cube(4, -2, 2, checkpoint_interval=3)
    cp = tmp_path / "i.ckpt"
    rep = box_search(spec, checkpoint=str(cp))
    assert len(Checkpoint.load(str(cp)).completed) == 5
    assert rep.slices == 5


# ------------------------------------------------------------ long target

@pytest.mark.long
def test_degree8_full_box():
    rep = box_search(SearchSpec.cube(8, -6, 6), workers=4, budget=13**7)
    assert rep.survivors == ()
