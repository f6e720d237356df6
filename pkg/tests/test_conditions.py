import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cheart.datakit.conditions import ConditionSamplerSpec, age_group_index, encode_conditions
from cheart.datakit.types import (
    CONDITION_VECTOR_DIM,
    N_AGE_GROUPS,
    ConditionProfile,
    NormalizationBounds,
)


def profile(age=45, gender="male", weight=82.0, height=168.5, sbp=131.0):
    return ConditionProfile(
        age_years=age, gender=gender, weight_kg=weight, height_cm=height, sbp_mmhg=sbp
    )


class TestAgeGroups:
    def test_decade_bins(self):
        assert age_group_index(18) == 0
        assert age_group_index(19) == 0
        assert age_group_index(20) == 1
        assert age_group_index(45) == 3
        assert age_group_index(73) == 6

    def test_clamped_at_edges(self):
        assert age_group_index(5) == 0
        assert age_group_index(95) == N_AGE_GROUPS - 1


class TestEncode:
    def test_lower_bounds_map_to_zero(self):
        v = encode_conditions(profile(age=18, gender="female", weight=33.0, height=142.0, sbp=79.0))
        assert v.values.shape == (CONDITION_VECTOR_DIM,)
        assert v.values[0] == 1.0
        assert v.values[1:N_AGE_GROUPS].sum() == 0.0
        assert v.values[N_AGE_GROUPS] == 0.0  # female flag
        assert np.all(v.values[N_AGE_GROUPS + 1 :] == 0.0)

    def test_upper_bounds_map_to_one(self):
        v = encode_conditions(profile(age=73, gender="male", weight=131.0, height=195.0, sbp=183.0))
        assert v.values[6] == 1.0
        assert v.values[:6].sum() == 0.0
        assert v.values[N_AGE_GROUPS] == 1.0
        assert np.all(v.values[N_AGE_GROUPS + 1 :] == 1.0)

    def test_weight_midpoint_is_half(self):
        # (82 - 33) / (131 - 33) = 0.5 exactly
        v = encode_conditions(profile(age=45, weight=82.0))
        assert v.age_group == 3
        assert v.values[N_AGE_GROUPS + 1] == 0.5

    def test_out_of_bounds_values_clamp(self):
        lo = encode_conditions(profile(weight=10.0))
        hi = encode_conditions(profile(weight=400.0))
        assert lo.values[N_AGE_GROUPS + 1] == 0.0
        assert hi.values[N_AGE_GROUPS + 1] == 1.0

    def test_custom_bounds(self):
        b = NormalizationBounds(weight_kg=(0.0, 100.0))
        v = encode_conditions(profile(weight=25.0), bounds=b)
        assert v.values[N_AGE_GROUPS + 1] == 0.25

    def test_gender_flag_positions(self):
        f = encode_conditions(profile(gender="female"))
        m = encode_conditions(profile(gender="male"))
        assert f.values[N_AGE_GROUPS] == 0.0
        assert m.values[N_AGE_GROUPS] == 1.0

    @given(
        age=st.integers(10, 79),
        gender=st.sampled_from(["female", "male"]),
        weight=st.floats(30.0, 140.0),
        height=st.floats(140.0, 200.0),
        sbp=st.floats(70.0, 190.0),
    )
    def test_vector_always_valid(self, age, gender, weight, height, sbp):
        v = encode_conditions(profile(age=age, gender=gender, weight=weight, height=height, sbp=sbp))
        onehot = v.values[:N_AGE_GROUPS]
        assert onehot.sum() == 1.0
        assert set(np.unique(onehot)) <= {0.0, 1.0}
        assert np.all(v.values >= 0.0) and np.all(v.values <= 1.0)


class TestProfileValidation:
    def test_rejects_unknown_gender(self):
        with pytest.raises(ValueError):
            profile(gender="other")

    def test_rejects_nonpositive_measurements(self):
        with pytest.raises(ValueError):
            profile(weight=0.0)
        with pytest.raises(ValueError):
            profile(height=-170.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            profile(sbp=float("nan"))

    def test_round_trip_dict(self):
        p = profile()
        assert ConditionProfile.from_dict(p.as_dict()) == p


class TestSampler:
    def test_deterministic(self):
        spec = ConditionSamplerSpec()
        a = spec.sample(np.random.default_rng(5))
        b = spec.sample(np.random.default_rng(5))
        assert a == b

    def test_samples_stay_in_population_ranges(self):
        spec = ConditionSamplerSpec()
        rng = np.random.default_rng(0)
        for _ in range(500):
            p = spec.sample(rng)
            assert 18 <= p.age_years <= 73
            assert 33.0 <= p.weight_kg <= 131.0
            assert 142.0 <= p.height_cm <= 195.0
            assert 79.0 <= p.sbp_mmhg <= 183.0

    def test_both_genders_appear(self):
        spec = ConditionSamplerSpec()
        rng = np.random.default_rng(0)
        genders = {spec.sample(rng).gender for _ in range(100)}
        assert genders == {"female", "male"}

    def test_taller_on_average_for_male(self):
        spec = ConditionSamplerSpec()
        rng = np.random.default_rng(0)
        samples = [spec.sample(rng) for _ in range(400)]
        mean_h = {
            g: np.mean([p.height_cm for p in samples if p.gender == g])
            for g in ("female", "male")
        }
        assert mean_h["male"] > mean_h["female"]
