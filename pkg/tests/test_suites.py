from hopfgalois.suites import lemma_suite


def test_lemma_suite():
    out = lemma_suite(seed=0)
    assert out["ok"]
    assert out["sylow_transitivity"]["subgroups"] == 210
    for row in out["censuses"]:
        assert row["delta_over_n"] == 0 and row["power_formula_fail"] == 0
        assert row["max_delta_index"] <= 3
        if row["p_greater_than_n"]:
            assert row["lemma_fail"] == 0
            assert row["abelian_types"] == [f"abelian {row['ambient']['exponents']}"]
