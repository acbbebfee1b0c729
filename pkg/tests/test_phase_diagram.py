import math

import numpy as np
import pytest

from config.settings import RunConfig
from modules.model import GaussianInitialState
from modules.phase_diagram import PhaseDiagram


def test_default_grid_uses_cell_midpoints():
    np.testing.assert_allclose(PhaseDiagram.default_n_beta_grid(2.0, 4), [0.25, 0.75, 1.25, 1.75])


def test_count_entropy_extrema_of_a_known_curve():
    assert PhaseDiagram.count_entropy_extrema(lambda gt: gt * np.exp(-gt)) == 1
    assert PhaseDiagram.count_entropy_extrema(lambda gt: 1.0 - np.exp(-gt)) == 0


def test_gaussian_table():
    table = PhaseDiagram.gaussian_table(1.0, [0.5, 1.0, 1.3, 1.5, 3.0])
    assert table["kind"] == "gaussian"
    assert table["critical_n_beta"] == pytest.approx(math.sinh(1.0) ** 2)
    assert table["critical_temperature"] > 0
    phases = [row["phase"] for row in table["rows"]]
    assert phases == ["SingleHump", "SingleHump", "SingleHump", "MonotoneFromBelow", "MonotoneFromBelow"]
    assert all(row["consistent"] for row in table["rows"])
    assert table["rows"][0]["entropy_max"] > 0


def test_coherent_state_table_has_no_critical_temperature():
    table = PhaseDiagram.gaussian_table(0.0, [0.5])
    assert table["critical_temperature"] is None
    assert table["rows"][0]["phase"] == "MonotoneFromBelow"
    assert table["rows"][0]["consistent"]


def test_fock_table():
    table = PhaseDiagram.fock_table(1, [0.5, 1.2, 1.5])
    assert table["boundaries"]["lower"] == 1.0
    assert table["boundaries"]["offset"] == pytest.approx((math.sqrt(3.0) - 1.0) / 2.0, abs=1e-3)
    assert [row["phase"] for row in table["rows"]] == ["SingleHump", "DoubleExtremum", "MonotoneFromBelow"]
    assert all(row["consistent"] for row in table["rows"])
    assert table["critical_temperatures"]["upper"] > table["critical_temperatures"]["lower"]


def test_from_config_default_grids():
    config = RunConfig("phase", gaussian=[GaussianInitialState(squeeze_r=1.0)], fock=[2], phase_points=8)
    tables = PhaseDiagram.from_config(config)["tables"]
    assert [table["kind"] for table in tables] == ["gaussian", "fock"]
    for table in tables:
        assert len(table["rows"]) == 8
        assert all(row["consistent"] for row in table["rows"])
    # the Fock grid reaches past N_c(2)
    assert tables[1]["rows"][-1]["phase"] == "MonotoneFromBelow"


def test_from_config_explicit_n_beta_values():
    config = RunConfig("phase", fock=[1], n_beta=[0.5, 2.0])
    tables = PhaseDiagram.from_config(config)["tables"]
    assert len(tables) == 1
    assert [row["n_beta"] for row in tables[0]["rows"]] == [0.5, 2.0]


def test_from_config_single_n_beta_value():
    config = RunConfig("phase", fock=[1], n_beta=[2.0])
    rows = PhaseDiagram.from_config(config)["tables"][0]["rows"]
    assert [row["n_beta"] for row in rows] == [2.0]


def test_from_config_temperature_selects_one_bath():
    config = RunConfig("phase", fock=[1], temperature=1.0)
    rows = PhaseDiagram.from_config(config)["tables"][0]["rows"]
    assert len(rows) == 1
    assert rows[0]["n_beta"] == pytest.approx(1.0 / math.expm1(1.0))
