import io
import json
import numpy as np
import pandas as pd
import pytest
from tailix.cli.main import main, build_parser
from tailix.utils.io import read_csv


def _write(tmp_path, text: str, name: str = "sample.txt") -> str:
    path = str(tmp_path / name)
    with open(path, "w") as f:
        f.write(text)
    return path


def _key_values(text: str) -> dict:
    return dict(line.split(": ", 1) for line in text.strip().split("\n"))


"""
Tests regarding the parser
"""


def test_parser_exit_codes(capsys):
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 4
    with pytest.raises(SystemExit) as e:
        main(["estimate", "sample.txt", "--method", "median", "--k", "2"])
    assert e.value.code == 4
    with pytest.raises(SystemExit) as e:
        main(["bias-curve", "--alpha", "1", "--m-list", "10,x"])
    assert e.value.code == 4
    assert "comma separated" in capsys.readouterr().err
    args = build_parser().parse_args(["theory", "--alpha", "1", "--beta", "2", "--n", "100"])
    assert args.c1 == 1 and args.c2 == 1


"""
Tests regarding cmd_estimate
"""


def test_estimate_dpr(tmp_path, capsys):
    path = _write(tmp_path, "# blocks (4, 2) and (8, 1)\n4\n2\n8\n1\n")
    assert main(["estimate", path, "--method", "dpr", "--m", "2"]) == 0
    out = capsys.readouterr().out
    assert out.split("\n")[0] == "method,tuning,native,alpha_hat,gamma_hat,p_hat"
    table = pd.read_csv(io.StringIO(out))
    assert table["method"][0] == "dpr"
    assert table["tuning"][0] == "m=2"
    assert np.isclose(table["native"][0], 0.3125)
    assert np.isclose(table["p_hat"][0], 0.3125)
    assert np.isclose(table["alpha_hat"][0], 0.3125 / 0.6875)


def test_estimate_order_statistics(tmp_path, capsys):
    path = _write(tmp_path, "1\n2\n4\n8\n")
    assert main(["estimate", path, "--method", "hill", "--k", "1,2"]) == 0
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert table["tuning"].tolist() == ["k=1", "k=2"]
    assert np.isclose(table["gamma_hat"][0], np.log(2))
    assert np.isclose(table["gamma_hat"][1], 1.5 * np.log(2))
    # gamma <= -1 has no p-scale value
    assert main(["estimate", path, "--method", "moment", "--k", "2"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith(",undefined")
    table = pd.read_csv(io.StringIO(out), na_values=["undefined"])
    assert np.isclose(table["gamma_hat"][0], 1.5 * np.log(2) - 4)
    assert np.isnan(table["p_hat"][0])


def test_estimate_block_variants(tmp_path, capsys):
    path = _write(tmp_path, "\n".join(str(value) for value in range(1, 41)) + "\n")
    assert main(["estimate", path, "--method", "gdpr", "--m", "4", "--kernel", "log"]) == 0
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert table["tuning"][0] == "m=4;kernel=log"
    assert np.isclose(table["gamma_hat"][0], 1 / table["alpha_hat"][0])
    assert main(["estimate", path, "--method", "qi", "--m", "10", "--s", "2"]) == 0
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert table["tuning"][0] == "m=10;s=2"


def test_estimate_errors(tmp_path, capsys):
    path = _write(tmp_path, "4\n2\n0\n1\n")
    assert main(["estimate", path, "--method", "dpr", "--m", "2"]) == 2
    assert "line 3" in capsys.readouterr().err
    path = _write(tmp_path, "4\n2\nfour\n", name="text.txt")
    assert main(["estimate", path, "--method", "dpr", "--m", "2"]) == 2
    assert "line 3" in capsys.readouterr().err
    assert main(["estimate", str(tmp_path / "missing.txt"), "--method", "dpr", "--m", "2"]) == 2
    path = _write(tmp_path, "1\n2\n4\n8\n", name="valid.txt")
    # --k missing
    assert main(["estimate", path, "--method", "hill"]) == 4
    # k outside of [4, N - 1]
    assert main(["estimate", path, "--method", "pickands", "--k", "4"]) == 4
    assert main(["estimate", path, "--method", "dpr", "--m", "5"]) == 4
    # Ties: both Pickands gaps vanish
    path = _write(tmp_path, "1\n1\n1\n1\n1\n1\n", name="ties.txt")
    assert main(["estimate", path, "--method", "pickands", "--k", "4"]) == 3
    assert "degenerate" in capsys.readouterr().err


"""
Tests regarding cmd_theory
"""


def test_theory(capsys):
    assert main(["theory", "--alpha", "1", "--beta", "2", "--n", "1000000"]) == 0
    values = _key_values(capsys.readouterr().out)
    assert np.isclose(float(values["chi"]), 1 / 3)
    assert np.isclose(float(values["zeta"]), 1)
    assert values["m_opt"] == "139"
    assert np.isclose(float(values["amse"]), 1.7331e-5, rtol=1e-4)
    assert np.isclose(float(values["k_opt_1"]), 12599, atol=1)
    assert np.isclose(float(values["rmmse_1"]), 2.3295, atol=1e-4)
    # D_2 = 0 for beta = 2 alpha = 2
    assert values["D_2"] == "0"
    assert values["rmmse_2"] == "degenerate"
    assert values["k_opt_2"] == "degenerate"
    assert np.isclose(float(values["D_3"]), 0.25)


def test_theory_degenerate(capsys):
    assert main(["theory", "--alpha", "1", "--beta", "2", "--c2", "0", "--n", "1000000"]) == 0
    values = _key_values(capsys.readouterr().out)
    assert float(values["chi"]) == 0
    assert values["m_opt"] == "degenerate"
    assert values["amse"] == "degenerate"
    # The ratios do not depend on c2
    assert np.isclose(float(values["rmmse_1"]), 2.3295, atol=1e-4)
    assert main(["theory", "--alpha", "2", "--beta", "1", "--n", "1000"]) == 4


"""
Tests regarding cmd_simulate
"""


def test_simulate_reproducible(tmp_path, capsys):
    paths = [str(tmp_path / "first.json"), str(tmp_path / "second.json")]
    for path in paths:
        assert main(["simulate", "--alpha", "1", "--beta", "2", "--c2", "1", "--n", "1000", "--method", "dpr",
                     "--m", "5", "--replicates", "20", "--seed", "42", "--out", path]) == 0
        summary = capsys.readouterr().out
        assert summary.startswith("mean=")
        assert "valid=20" in summary
    with open(paths[0], "rb") as f:
        first = f.read()
    with open(paths[1], "rb") as f:
        second = f.read()
    assert first == second
    document = json.loads(first)
    assert document["config"]["base_seed"] == 42
    assert document["config"]["tuning"] == {"m": 5}
    assert len(document["estimates"]) == 20


def test_simulate_optimal_tuning(tmp_path, capsys):
    path = str(tmp_path / "report.json")
    assert main(["simulate", "--alpha", "1", "--beta", "2", "--c2", "1", "--n", "1000000", "--method", "dpr",
                 "--replicates", "1", "--seed", "3", "--out", path]) == 0
    with open(path, "r") as f:
        document = json.load(f)
    assert document["config"]["tuning"] == {"m": 139}
    assert document["config"]["tuning_rule"] == "optimal"
    # No optimal k for the pure Pareto case
    assert main(["simulate", "--alpha", "1", "--n", "1000", "--method", "hill", "--seed", "3"]) == 3


def test_simulate_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as e:
        main(["simulate", "--alpha", "1", "--n", "1000", "--method", "dpr", "--m", "5"])
    assert e.value.code == 4
    # beta = inf requires c2 = 0
    assert main(["simulate", "--alpha", "1", "--c2", "1", "--n", "1000", "--method", "dpr", "--m", "5",
                 "--seed", "1"]) == 4
    # All replicates are degenerate
    path = str(tmp_path / "ties.json")
    assert main(["simulate", "--alpha", "1", "--n", "200", "--method", "pickands", "--k", "100", "--replicates", "3",
                 "--seed", "1", "--resolution", "100", "--out", path]) == 3
    assert "valid=0 degenerate=3" in capsys.readouterr().out
    with open(path, "r") as f:
        assert json.load(f)["degenerate_replicates"] == [0, 1, 2]


def test_simulate_block_variance(capsys):
    assert main(["simulate", "--alpha", "1", "--n", "200000", "--method", "dpr", "--m", "2", "--seed", "42"]) == 0
    fields = dict(field.split("=") for field in capsys.readouterr().out.split())
    # One replicate: no variance across replicates, the block variance is close to sigma^2 = 1/12
    assert fields["variance"] == "undefined"
    assert abs(float(fields["block_variance"]) - 1 / 12) <= 0.02 / 12


"""
Tests regarding cmd_regions
"""


def test_regions(tmp_path, capsys):
    csv_path = str(tmp_path / "grid.csv")
    pgm_path = str(tmp_path / "map.pgm")
    assert main(["regions", "--x-min", "1", "--x-max", "4", "--y-min", "2", "--y-max", "12", "--x-steps", "4",
                 "--y-steps", "11", "--out", csv_path, "--pgm", pgm_path]) == 0
    assert "invalid=" in capsys.readouterr().out
    table, _ = read_csv(csv_path)
    assert table.shape[0] == 44
    cell = table[(table["alpha"] == 4) & (table["beta"] == 12)]
    assert cell["label"].tolist() == ["dpr-dominates"]
    assert table[table["beta"] <= table["alpha"]]["label"].unique().tolist() == ["invalid"]
    with open(pgm_path, "rb") as f:
        assert f.read(2) == b"P5"
    assert main(["regions", "--versus", "pickands", "--x-min", "1", "--x-max", "4", "--y-min", "2", "--y-max", "12",
                 "--x-steps", "4", "--y-steps", "11", "--out", csv_path]) == 0
    table, _ = read_csv(csv_path)
    cell = table[(table["alpha"] == 1) & (table["beta"] == 3)]
    assert cell["label"].tolist() == ["dpr-dominates"]
    # beta = 12 > 4 alpha is outside of the default map
    assert table[(table["alpha"] == 1) & (table["beta"] == 12)]["label"].tolist() == ["invalid"]
    assert main(["regions", "--max-beta-ratio", "inf", "--x-min", "1", "--x-max", "4", "--y-min", "2", "--y-max", "12",
                 "--x-steps", "4", "--y-steps", "11", "--out", csv_path]) == 0
    table, _ = read_csv(csv_path)
    assert table[(table["alpha"] == 1) & (table["beta"] == 12)]["label"].tolist() != ["invalid"]
    assert main(["regions", "--steps", "1", "--out", csv_path]) == 4
    assert main(["regions", "--max-beta-ratio", "1", "--out", csv_path]) == 4


"""
Tests regarding cmd_bias_curve
"""


def test_bias_curve(tmp_path, capsys):
    path = str(tmp_path / "curve.csv")
    assert main(["bias-curve", "--alpha", "1", "--beta", "2", "--c2", "1", "--m-list", "10,100", "--out", path]) == 0
    table, comment_lines = read_csv(path)
    assert comment_lines == ["chi=0.33333333333333331"]
    assert table["m"].tolist() == [10, 100]
    assert table["normalized"][1] > 0
    # Pure Pareto: the estimator is unbiased for every block size
    assert main(["bias-curve", "--alpha", "2", "--m-list", "2,50"]) == 0
    out = capsys.readouterr().out
    # Same chi as the theory command with c2 = 0
    assert out.startswith("# chi=0\nm,gamma_m,normalized\n")
    table = pd.read_csv(io.StringIO(out), comment="#", na_values=["undefined"])
    assert np.allclose(table["gamma_m"], 0, atol=1e-9)
    assert table["normalized"].isna().all()


def test_bias_curve_errors():
    assert main(["bias-curve", "--alpha", "1", "--m-list", "1,10"]) == 4
    assert main(["bias-curve", "--alpha", "1", "--beta", "2", "--c2", "1", "--m-list", "2", "--rel-tol", "1e-15",
                 "--abs-tol", "1e-300", "--max-subdivisions", "1"]) == 5
