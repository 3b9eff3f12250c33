"""Scenario file grammar, validation errors, canonical form and hashing."""

import math
from pathlib import Path

import pytest

from irsmimo.scenario import (
    PowerConfig,
    Scenario,
    ScenarioError,
    parse_scenario,
    parse_scenario_text,
    scenario_hash,
    serialize_scenario,
    with_rx,
    with_tx,
)

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"

MINIMAL = """
wave.wavelength_m = 0.005
tx.count = 5
tx.spacing_m = 0.1
tx.distance_m = 10.0
tx.azimuth_rad = 0.5
tx.elevation_rad = 0.6
rx.count = 3
rx.spacing_m = 0.1
rx.distance_m = 12.0
rx.azimuth_rad = 1.5
rx.elevation_rad = 0.7
irs.count_x = 5
irs.count_y = 5
irs.spacing_x_m = 0.1
irs.spacing_y_m = 0.1
"""


def edit(text, key, value):
    """Replace (or drop, with value=None) one key in a scenario text blob."""
    out = []
    for line in text.splitlines():
        if line.strip().startswith(key + " "):
            if value is None:
                continue
            line = f"{key} = {value}"
        out.append(line)
    return "\n".join(out) + "\n"


class TestParsing:
    def test_minimal_file_gets_the_documented_defaults(self):
        scn = parse_scenario_text(MINIMAL)
        assert scn.wave.absorption == 0.0
        assert scn.reflection.amplitude == 1.0
        assert scn.reflection.polarization == pytest.approx(math.pi / 3)
        assert scn.power.per_antenna_power == 1.0
        assert scn.focusing_mode == "reflective"
        assert scn.tx.orient_azimuth == 0.0
        assert scn.tx.orient_elevation == pytest.approx(math.pi / 2)
        # element length defaults to the grid pitch (gapless surface)
        assert scn.irs.re_len_x == scn.irs.spacing_x

    def test_comments_and_blank_lines_are_ignored(self):
        scn = parse_scenario_text("# heading\n\n" + MINIMAL + "\nrx.count = 3 # inline\n".replace("rx.count = 3", "meta.note = x"))
        assert scn.metadata["note"] == "x"

    def test_carrier_frequency_converts_to_wavelength(self):
        text = edit(MINIMAL, "wave.wavelength_m", None) + "\nwave.carrier_hz = 140e9\n"
        scn = parse_scenario_text(text)
        assert scn.wave.wavelength == pytest.approx(299792458.0 / 140e9, rel=1e-15)

    def test_metadata_keys_collect_into_a_dict(self):
        scn = parse_scenario_text(MINIMAL + "meta.label = trial 7\nmeta.author = someone\n")
        assert scn.metadata == {"label": "trial 7", "author": "someone"}

    def test_explicit_focusing_carries_the_phase_list(self):
        text = (
            edit(MINIMAL, "irs.count_x", 1).replace("irs.count_y = 5", "irs.count_y = 3")
            + "focusing = explicit\nfocusing.betas_rad = 0.1, 0.2, 0.3\n"
        )
        scn = parse_scenario_text(text)
        assert scn.focusing_betas == (0.1, 0.2, 0.3)


class TestErrors:
    def test_syntax_error_reports_the_line(self):
        with pytest.raises(ScenarioError) as err:
            parse_scenario_text("wave.wavelength_m = 0.005\nnot a pair\n")
        assert err.value.line == 2
        assert "key = value" in str(err.value)

    def test_duplicate_key_rejected(self):
        with pytest.raises(ScenarioError, match="duplicate"):
            parse_scenario_text(MINIMAL + "tx.count = 5\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ScenarioError, match="unknown key 'tx.spcing_m'"):
            parse_scenario_text(MINIMAL + "tx.spcing_m = 0.1\n")

    def test_missing_required_key(self):
        with pytest.raises(ScenarioError, match="missing required key 'rx.distance_m'"):
            parse_scenario_text(edit(MINIMAL, "rx.distance_m", None))

    def test_wavelength_and_carrier_are_mutually_exclusive(self):
        with pytest.raises(ScenarioError, match="exactly one"):
            parse_scenario_text(MINIMAL + "wave.carrier_hz = 60e9\n")
        with pytest.raises(ScenarioError, match="exactly one"):
            parse_scenario_text(edit(MINIMAL, "wave.wavelength_m", None))

    def test_even_antenna_count_rejected(self):
        with pytest.raises(ScenarioError, match="odd"):
            parse_scenario_text(edit(MINIMAL, "tx.count", 4))

    def test_non_numeric_value_names_the_key(self):
        with pytest.raises(ScenarioError, match="tx.distance_m"):
            parse_scenario_text(edit(MINIMAL, "tx.distance_m", "ten"))

    def test_out_of_range_angle_is_a_scenario_error(self):
        with pytest.raises(ScenarioError, match="tx array"):
            parse_scenario_text(edit(MINIMAL, "tx.elevation_rad", 2.0))

    def test_beta_list_without_explicit_mode_rejected(self):
        with pytest.raises(ScenarioError, match="explicit"):
            parse_scenario_text(MINIMAL + "focusing.betas_rad = 0.0\n")

    def test_beta_list_length_must_match_surface(self):
        with pytest.raises(ScenarioError, match="25"):
            parse_scenario_text(MINIMAL + "focusing = explicit\nfocusing.betas_rad = 0.0, 0.1\n")

    def test_missing_file_propagates(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            parse_scenario(tmp_path / "nope.txt")


class TestCanonicalForm:
    def test_round_trip_is_exact(self):
        scn = parse_scenario_text(MINIMAL + "meta.tag = rt\n")
        again = parse_scenario_text(serialize_scenario(scn))
        assert again == scn
        assert serialize_scenario(again) == serialize_scenario(scn)

    def test_hash_is_stable_and_sensitive(self):
        scn = parse_scenario_text(MINIMAL)
        assert scenario_hash(scn) == scenario_hash(parse_scenario_text(MINIMAL))
        moved = with_tx(scn, distance=10.5)
        assert scenario_hash(moved) != scenario_hash(scn)

    def test_pose_update_helpers_touch_one_side_only(self):
        scn = parse_scenario_text(MINIMAL)
        assert with_tx(scn, distance=9.0).rx == scn.rx
        assert with_rx(scn, distance=9.0).tx == scn.tx
        assert with_rx(scn, distance=9.0).rx.distance == 9.0


class TestShippedFiles:
    def test_baseline_file_matches_its_documented_setup(self):
        scn = parse_scenario(SCENARIO_DIR / "cascade_baseline.txt")
        assert scn.tx.n_antennas == scn.rx.n_antennas == 5
        assert scn.irs.q_x == scn.irs.q_y == 15
        assert scn.wave.wavelength == pytest.approx(0.005)
        assert scn.tx.distance == scn.rx.distance == 10.0
        # the Rx spacing is an assumption, flagged in the file itself
        assert "spacing" in scn.metadata.get("note", "")

    def test_all_shipped_scenarios_parse(self):
        files = sorted(SCENARIO_DIR.glob("*.txt"))
        assert len(files) >= 3
        for path in files:
            parse_scenario(path)


class TestPowerConfig:
    def test_snr_is_the_power_ratio(self):
        assert PowerConfig(2.0, 0.5).snr == 4.0

    def test_rejects_nonpositive_powers(self):
        with pytest.raises(ValueError):
            PowerConfig(0.0, 1.0)
        with pytest.raises(ValueError):
            PowerConfig(1.0, -1e-3)


def test_scenario_dataclass_validates_focusing_mode():
    base = parse_scenario_text(MINIMAL)
    with pytest.raises(ValueError):
        Scenario(
            wave=base.wave,
            tx=base.tx,
            rx=base.rx,
            irs=base.irs,
            focusing_mode="wibble",
        )
