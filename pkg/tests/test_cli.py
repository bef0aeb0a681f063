import json
import math

import pytest
from click.testing import CliRunner

from berg.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _invoke(runner, args, **kw):
    result = runner.invoke(main, args, **kw)
    assert result.exit_code == 0, result.output
    return result.output


def test_ball_kernel_cmd(runner):
    out = _invoke(runner, ["ball-kernel", "--dim", "2", "--z", "0,0", "--w", "0,0"])
    data = json.loads(out)
    assert data["re"] == pytest.approx(2 / math.pi**2)
    assert data["im"] == 0


def test_ball_kernel_usage_error(runner):
    result = runner.invoke(main, ["ball-kernel", "--dim", "2", "--z", "0", "--w", "0,0"])
    assert result.exit_code == 2


def test_levi_cmd_builtin_and_file(runner, tmp_path):
    out = _invoke(runner, ["levi", "--rho", "sphere-2", "--point", "1,0"])
    data = json.loads(out)
    assert data["strictly_pseudoconvex"] and data["eigenvalues"] == [1.0]

    out = _invoke(runner, ["levi", "--rho", "u-domain", "--point", "0,0.5,0"])
    assert json.loads(out)["smooth"] is False

    from berg.ball import sphere_defining_function

    path = tmp_path / "rho.json"
    path.write_text(json.dumps(sphere_defining_function(2).rho.to_json_dict()))
    out = _invoke(runner, ["levi", "--rho", str(path), "--point", "0,1"])
    assert json.loads(out)["eigenvalues"] == [1.0]


def test_levi_off_surface_is_usage_error(runner):
    result = runner.invoke(main, ["levi", "--rho", "sphere-2", "--point", "0.5,0"])
    assert result.exit_code == 2


GENS_I = [[[{"zeta": 4, "terms": [[1, "1"]]}, [0, 0]], [[0, 0], {"zeta": 4, "terms": [[1, "1"]]}]]]
GENS_MINUS = [[[{"zeta": 2, "terms": [[1, "1"]]}, [0, 0]], [[0, 0], {"zeta": 2, "terms": [[1, "1"]]}]]]
GENS_REFL = [[[{"zeta": 2, "terms": [[1, "1"]]}, [0, 0]], [[0, 0], [1, 0]]]]


def test_group_cmd(runner, tmp_path):
    path = tmp_path / "gens.json"
    path.write_text(json.dumps(GENS_I))
    data = json.loads(_invoke(runner, ["group", "--gens", str(path), "--check", "fpf"]))
    assert data == {"dim": 2, "exact": True, "fixed_point_free": True, "order": 4}

    path.write_text(json.dumps(GENS_REFL))
    data = json.loads(_invoke(runner, ["group", "--gens", str(path), "--check", "reflections"]))
    assert data["order"] == 2 and data["reflections"] == 1


def test_basic_map_cmd_with_cache(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("BERG_CACHE_DIR", str(tmp_path / "cache"))
    path = tmp_path / "gens.json"
    path.write_text(json.dumps(GENS_MINUS))
    out1 = _invoke(runner, ["basic-map", "--group", str(path), "--syzygies", "2"])
    data = json.loads(out1)
    assert data["degrees"] == [2, 2, 2]
    assert len(data["syzygies"]) == 1
    cached = list((tmp_path / "cache").glob("basic-map-*.json"))
    assert len(cached) == 1
    out2 = _invoke(runner, ["basic-map", "--group", str(path), "--syzygies", "2"])
    assert out1 == out2


def test_quotient_sum_and_push(runner, tmp_path):
    gens = tmp_path / "gens.json"
    gens.write_text(json.dumps(GENS_MINUS))
    pairs = tmp_path / "pairs.json"
    pairs.write_text(json.dumps([[[[0.2, 0.1], [0.05, -0.3]], [[0.15, -0.2], [0.25, 0.1]]]]))
    out = _invoke(runner, ["quotient-sum", "--group", str(gens), "--dim", "2", "--pairs", str(pairs)])
    lines = out.strip().splitlines()
    assert lines[0] == "z,w,re,im"
    assert len(lines) == 2

    cover = tmp_path / "cover.json"
    cover.write_text(
        json.dumps(
            {
                "generators": GENS_MINUS,
                "map": [
                    {"dim": 2, "terms": [[[2, 0], 1, 0]]},
                    {"dim": 2, "terms": [[[1, 1], 1, 0]]},
                    {"dim": 2, "terms": [[[0, 2], 1, 0]]},
                ],
                "chart": [0, 1],
            }
        )
    )
    out = _invoke(runner, ["quotient-push", "--cover", str(cover), "--pairs", str(pairs)])
    assert out.startswith("z,w,re,im")


def test_omega_kernel_cmd(runner):
    closed = json.loads(_invoke(runner, ["omega-kernel", "--z", "0,0", "--lambda", "0.5"]))
    series = json.loads(
        _invoke(runner, ["omega-kernel", "--z", "0,0", "--lambda", "0.5", "--series", "300"])
    )
    assert closed["re"] == pytest.approx(series["re"], rel=1e-10)
    assert series["terms"] == 300


def test_moments_cmd(runner):
    data = json.loads(_invoke(runner, ["moments", "--m", "1", "--alpha", "0,0"]))
    assert data["exact"]["pi_power"] == 3
    assert data["exact"]["re"] == ["4"]
    data = json.loads(_invoke(runner, ["moments", "--m", "1", "--alpha", "1,0"]))
    assert data["exact"] == "infinite"
    data = json.loads(_invoke(runner, ["moments", "--m", "2", "--alpha", "1,1", "--numeric"]))
    assert data["numeric"] == pytest.approx((2 * math.pi) ** 3 / 12)


def test_omega_grid_cmd(runner):
    out = _invoke(runner, ["omega-grid", "--steps", "3"])
    lines = out.strip().splitlines()
    assert lines[0] == "r1,r2,value"
    assert len(lines) == 10


def test_fit_cmd(runner):
    out = _invoke(runner, ["fit", "--kernel", "disk", "--dz", "4", "--dk", "1", "--boundary-check"])
    data = json.loads(out)
    assert data["residual"] <= 1e-10
    assert data["boundary_max"] <= 1e-8


def test_fit_cmd_samples_file(runner, tmp_path):
    path = tmp_path / "samples.json"
    path.write_text(
        json.dumps(
            {
                "features": [[x / 20.0] for x in range(40)],
                "values": [2.5] * 40,
            }
        )
    )
    data = json.loads(_invoke(runner, ["fit", "--kernel", str(path), "--dz", "0", "--dk", "1"]))
    assert data["residual"] <= 1e-12


def test_verify_isometry_exit_codes(runner):
    result = runner.invoke(main, ["verify", "isometry"])
    assert result.exit_code == 0
    for line in result.output.strip().splitlines():
        assert json.loads(line)["passed"]


def test_verify_transform_small(runner):
    result = runner.invoke(main, ["verify", "transform", "--seed", "1"])
    assert result.exit_code == 0


def test_usage_error_exit_code(runner):
    result = runner.invoke(main, ["moments", "--m", "not-an-int", "--alpha", "0,0"])
    assert result.exit_code == 2
