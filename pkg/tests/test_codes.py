"""Rank-metric codes: distances, duals, MRD, generalized weights."""

import random

import pytest

from rankscatter.field import create_field
from rankscatter.construction import (
    ConstructionParams,
    direct_sum,
    family_subspace,
    find_admissible,
    is_admissible,
    pseudoregulus_subspace,
)
from rankscatter.codes import (
    DistanceEstimate,
    RankCode,
    check_weight_axioms,
    code_from_system,
    compare_with_direct_sum,
    dual_code,
    family_weight_bounds,
    generalized_weights,
    is_mrd,
    min_distance,
    predicted_direct_sum_profile,
    random_code,
    rank_weight,
    singleton_bound_rhs,
)


@pytest.fixture(scope="module")
def F16():
    return create_field(2, 1, 4)


@pytest.fixture(scope="module")
def F8():
    return create_field(2, 1, 3)


@pytest.fixture(scope="module")
def ds_code(F8):
    ps = pseudoregulus_subspace(F8, 1)
    return code_from_system(direct_sum([ps, ps]))


def test_rank_weight_basics(F8):
    assert rank_weight(F8, (0, 0, 0)) == 0
    assert rank_weight(F8, (1, 1, 1, 1)) == 1
    g = F8.p
    assert rank_weight(F8, (1, g, F8.mul(g, g))) == 3
    # scalar invariance
    rng = random.Random(20)
    for _ in range(20):
        v = tuple(rng.randrange(8) for _ in range(4))
        c = 1 + rng.randrange(7)
        cv = tuple(F8.mul(c, x) for x in v)
        assert rank_weight(F8, v) == rank_weight(F8, cv)


def test_rank_weight_over_f4():
    F = create_field(2, 2, 3)
    theta = next(x for x in F.subfield_values if x not in (0, 1))
    assert rank_weight(F, (1, theta)) == 1  # both lie in a 1-dim F_4-span? no:
    # 1 and theta are F_4-scalars of 1, so the span of coordinates is F_4 * 1
    assert rank_weight(F, (1, F.p)) == 2


def test_code_shapes(F16, F8, ds_code):
    c1 = code_from_system(pseudoregulus_subspace(F16, 1))
    assert (c1.k, c1.t) == (2, 4)
    assert (ds_code.k, ds_code.t) == (4, 6)
    params = ConstructionParams(F16, 4, 2, (F16.p, 1, 1, 1))
    cf = code_from_system(family_subspace(params))
    assert (cf.k, cf.t) == (12, 16)
    assert cf.nondegenerate


def test_min_distance_pseudoregulus(F16):
    c = code_from_system(pseudoregulus_subspace(F16, 1))
    proj = min_distance(c, "projective")
    exh = min_distance(c, "exhaustive")
    assert proj.value == exh.value == 3  # n - h
    assert proj.codewords_checked == 17
    assert exh.codewords_checked == 255
    samp = min_distance(c, "sampled", budget=30, seed=4)
    assert not samp.exact and samp.value >= exh.value


def test_min_distance_direct_sum(ds_code):
    d = min_distance(ds_code, "projective")
    assert d.value == 2 and d.codewords_checked == 585
    assert min_distance(ds_code, "exhaustive").value == 2


def test_repeated_column_caps_distance(F8):
    # planted control: a repeated column forces d <= t - 1
    c = RankCode(F8, 2, 4, ((1, 1, 0, 2), (0, 0, 1, 3)))
    d = min_distance(c, "projective")
    assert d.value <= 3


def test_dual_code_identities(F16, ds_code):
    c = code_from_system(pseudoregulus_subspace(F16, 1))
    dc = dual_code(c)
    assert (dc.k, dc.t) == (2, 4)
    for r in c.G:
        for s in dc.G:
            acc = 0
            for a, b in zip(r, s):
                acc = F16.add(acc, F16.mul(a, b))
            assert acc == 0
    # dual of dual spans the original row space
    ddc = dual_code(dc)
    from rankscatter.linalg import rref

    assert rref(F16, ddc.G, 4)[0] == rref(F16, c.G, 4)[0]
    # dual of the MRD pseudoregulus code is MRD with d = 3
    dd = min_distance(dc, "projective")
    assert dd.value == 3 and is_mrd(dc, dd)


def test_mrd_checks(F16, ds_code):
    c1 = code_from_system(pseudoregulus_subspace(F16, 1))
    assert singleton_bound_rhs(4, 4, 3) == 8
    assert is_mrd(c1, min_distance(c1, "projective"))
    assert is_mrd(ds_code, min_distance(ds_code, "projective"))
    # a strictly worse code is not MRD
    worse = RankCode(F16, 2, 4, ((1, 1, 0, 0), (0, 0, 1, 1)))
    dw = min_distance(worse, "projective")
    assert dw.value < 3 and not is_mrd(worse, dw)
    with pytest.raises(ValueError):
        is_mrd(c1, DistanceEstimate(3, False, "sampled", 10))


def test_direct_sum_profile_m2(ds_code, F8):
    prof = generalized_weights(ds_code.system())
    assert prof.exact_tuple() == (2, 3, 5, 6)
    prof.validate()
    pred = predicted_direct_sum_profile(2, 3, 1)
    assert pred.exact_tuple() == (2, 3, 5, 6)
    # d_1 equals the codeword-side minimum distance
    assert prof.exact(1) == min_distance(ds_code, "projective").value


def test_direct_sum_profile_dual_and_axioms(ds_code):
    prof = generalized_weights(ds_code.system())
    dual_prof = generalized_weights(dual_code(ds_code).system())
    assert dual_prof.exact_tuple() == (3, 6)
    assert check_weight_axioms(prof, dual_prof, 6)


def test_axioms_reject_bad_profiles(ds_code):
    from rankscatter.codes import WeightProfile, EXACT

    good = generalized_weights(ds_code.system())
    bad = WeightProfile(2, 6)
    bad.add(1, 3, EXACT)
    bad.add(2, 3, EXACT)  # repeat: monotonicity broken
    assert not check_weight_axioms(good, bad, 6)
    shifted = WeightProfile(2, 6)
    shifted.add(1, 2, EXACT)
    shifted.add(2, 6, EXACT)  # overlaps the complement set
    assert not check_weight_axioms(good, shifted, 6)


def test_full_flag_axioms_trivial_case(F8):
    # [t, t] full space: profile (1, ..., t), empty dual profile
    from rankscatter.codes import WeightProfile, EXACT

    t = 4
    p = WeightProfile(t, t)
    for i in range(1, t + 1):
        p.add(i, i, EXACT)
    empty = WeightProfile(0, t)
    assert check_weight_axioms(p, empty, t)


def test_predicted_profile_m3():
    pred = predicted_direct_sum_profile(3, 3, 1)
    assert pred.exact(1) == 2 and pred.exact(2) == 3
    assert pred.exact(4) == 6 and pred.exact(5) == 8 and pred.exact(6) == 9
    assert pred.bounds(3) == (4, 5)
    # block bound d_{j(h+1)} <= jn shows up at exact indices consistently
    assert pred.exact(2) <= 3 and pred.exact(4) <= 6


def test_predicted_profile_m2_overlap_is_consistent():
    # d_{(m-1)(h+1)} = n agrees with d_{h+1} = n when m = 2
    pred = predicted_direct_sum_profile(2, 4, 1)
    assert pred.exact(2) == 4


def test_random_codes_satisfy_weight_axioms():
    towers = [create_field(2, 1, 3), create_field(2, 1, 4)]
    shapes = [(2, 4), (2, 5), (3, 5), (3, 6), (2, 6)]
    done = 0
    seed = 0
    while done < 20:
        tower = towers[done % 2]
        k, t = shapes[done % len(shapes)]
        if tower.order**k > 2**20:
            seed += 1
            done += 1
            continue
        code = random_code(tower, k, t, seed=seed)
        prof = generalized_weights(code.system())
        dual_prof = generalized_weights(dual_code(code).system())
        assert check_weight_axioms(prof, dual_prof, t), (tower.order, k, t, seed)
        assert prof.exact(1) == min_distance(code, "projective").value
        seed += 1
        done += 1


def test_sampled_weights_bound_the_exact_profile(ds_code):
    exact = generalized_weights(ds_code.system())
    sampled = generalized_weights(ds_code.system(), mode="sampled", budget=40, seed=6)
    for rho in range(1, 4):
        lo, hi = sampled.bounds(rho)
        assert lo is None  # sampled values are upper bounds on d_rho
        assert hi is not None and hi >= exact.exact(rho)
    # rho = k sees only the zero subspace and is exact in every mode
    assert sampled.exact(4) == exact.exact(4) == 6


def test_family_weight_bounds_instances():
    F64 = create_field(2, 1, 6)
    params = ConstructionParams(F64, 3, 2, (2, 1, 1))
    assert is_admissible(params)
    prof = family_weight_bounds(params)
    lo, _ = prof.bounds(3)
    assert lo == 2 * 6 - 2 * 2 - 2 == 6
    lo, _ = prof.bounds(6)
    assert lo == 3 * 6 - 2 - 2 == 14
    # s-range bounds require strong admissibility; m = 3 has no valid s
    with pytest.raises(ValueError):
        family_weight_bounds(params, s_list=[2])


def test_family_weight_bounds_reject_bad_params(F16):
    not_adm = ConstructionParams(F16, 4, 2, (1, 1, 1, 1))
    with pytest.raises(ValueError):
        family_weight_bounds(not_adm)
    adm_h1 = ConstructionParams(F16, 4, 1, (F16.p, 1, 1, 1))
    with pytest.raises(ValueError):
        family_weight_bounds(adm_h1)


def test_strong_bounds_with_m4():
    # m = 4 admits s = 2; find a strongly admissible tuple over F_256 (m | n = 8)
    F256 = create_field(2, 1, 8)
    params = find_admissible(F256, 4, 2, strong=True, limit=50_000)
    if params is None:
        pytest.skip("no strongly admissible tuple in the scan prefix")
    prof = family_weight_bounds(params, s_list=[2])
    n, h = 8, 2
    lo, _ = prof.bounds(2 * (h + 1))
    assert lo == 3 * (n - h - 1) == 15
    table = compare_with_direct_sum(params, s_list=[2])
    by_rho = {row["rho"]: row for row in table}
    # n > (s+1)(h+1): 8 > 9 is false, so no separation promised at s = 2
    assert by_rho[6]["baseline"] == 2 * n
    # but the top index always separates when n >= h+3
    assert by_rho[9]["separated"]


def test_sampled_family_weights_never_contradict_the_bounds():
    # a sampled upper bound on d_rho falling below a proved lower bound
    # would falsify the construction; check the two bounded indices
    F64 = create_field(2, 1, 6)
    params = ConstructionParams(F64, 3, 2, (2, 1, 1))
    sysV = family_subspace(params)
    bounds = family_weight_bounds(params)
    sampled = generalized_weights(sysV, rho_list=[3, 6], mode="sampled", budget=300, seed=8)
    for rho in (3, 6):
        lo, _ = bounds.bounds(rho)
        _, hi = sampled.bounds(rho)
        assert hi >= lo, f"sampled upper bound {hi} at rho={rho} contradicts proved lower {lo}"


def test_comparison_table_flags():
    F64 = create_field(2, 1, 6)
    params = ConstructionParams(F64, 3, 2, (2, 1, 1))
    table = compare_with_direct_sum(params)
    by_rho = {row["rho"]: row for row in table}
    # rho = h+1: bound 2n-2h-2 = 6 vs exact baseline n = 6 (n = 2h+2: no gap)
    assert by_rho[3] == {
        "rho": 3,
        "family_lower": 6,
        "baseline": 6,
        "baseline_provenance": "exact",
        "separated": False,
    }
    # rho = (m-1)(h+1): 14 > 12, strictly better than any direct sum
    assert by_rho[6]["separated"] and by_rho[6]["family_lower"] == 14


def test_profile_csv_export(ds_code):
    prof = generalized_weights(ds_code.system())
    csv = prof.to_csv()
    lines = csv.strip().splitlines()
    assert lines[0] == "rho,value,provenance,subspaces_checked"
    assert len(lines) == 5
    assert lines[1].startswith("1,2,exact,")
