import math

import pytest

import osm


def test_experiment_names():
    assert set(osm.experiment_names()) == {"mms2d-picard", "mms2d-newton", "airway2d"}


def test_picard_cell_converges():
    rows = osm.run("mms2d-picard", ks=[1], ms=[1], record_wall=False)
    assert len(rows) == 1
    r = rows[0]
    assert r.converged
    assert r.pc == "al"
    assert r.outer_iters == len(r.krylov_counts)
    assert 0 < r.err_j < 1
    assert r.wall_s < 0


def test_newton_cell_and_table():
    rows = osm.run("mms2d-newton", ks=[1], ms=[1], pcs=["gmg-vanka"])
    assert rows[0].converged
    assert rows[0].mean_krylov > 0
    table = osm.render_table(rows)
    assert "mms2d-newton" in table


def test_csv_round_trip(tmp_path):
    rows = osm.run("mms2d-picard", ks=[1], ms=[1], record_wall=False)
    path = tmp_path / "out.csv"
    osm.write_csv(str(path), rows)
    back = osm.read_csv(str(path))
    assert back[0].outer_iters == rows[0].outer_iters
    assert math.isclose(back[0].err_j, rows[0].err_j, rel_tol=1e-6)


def test_errors_are_raised():
    with pytest.raises(osm.Error):
        osm.run("no-such-experiment")
    with pytest.raises(osm.Error):
        osm.run("mms2d-newton", pcs=["bogus"])
