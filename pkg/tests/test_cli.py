import json

import pytest

from cpaclab.cli import main
from cpaclab.machine import Instr, constant_program, encode_program

D3 = '{"atoms":[[[3,1],"1/2"],[[5,0],"1/4"],[[7,1],"1/4"]]}'


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_vc_dim(capsys):
    code, out, _ = run_cli(capsys, "vc", "dim", "--class", '{"kind":"support_at_most","k":2}', "--domain", "6")
    assert (code, out) == (0, "2\n")


def test_class_spec_from_file(capsys, tmp_path):
    spec = tmp_path / "cube.json"
    spec.write_text('{"kind": "cube", "k": 3}')
    assert run_cli(capsys, "vc", "dim", "--class", str(spec), "--domain", "5")[:2] == (0, "2\n")


@pytest.mark.parametrize(
    "argv, out",
    [
        (["codec", "godel", "1,2"], "108"),
        (["codec", "ungodel", "5"], "null"),
        (["codec", "pair", "1,2"], "8"),
        (["codec", "unpair", "8"], "[1, 2]"),
        (["codec", "sample", "1,1,0,0"], "48"),
        (["codec", "unsample", "48"], "[[1, 1], [0, 0]]"),
    ],
)
def test_codec(capsys, argv, out):
    assert run_cli(capsys, *argv)[:2] == (0, out + "\n")


def test_machine_run(capsys):
    code, out, _ = run_cli(capsys, "machine", "run", "--program", '[{"op":"INC","r":1},{"op":"HALT"}]', "--input", "0", "--budget", "5")
    assert code == 0 and json.loads(out) == {"halted": True, "output": [1], "steps": 2}
    code, out, _ = run_cli(capsys, "machine", "run", "--code", "0", "--input", "7", "--budget", "5")
    assert json.loads(out) == {"halted": True, "output": [7], "steps": 0}


def test_machine_encode_decode(capsys):
    prog = '[{"op": "INC", "r": 1}, {"op": "HALT"}]'
    _, out, _ = run_cli(capsys, "machine", "encode", "--program", prog)
    _, back, _ = run_cli(capsys, "machine", "decode", "--code", out.strip())
    assert json.loads(back) == json.loads(prog)


def test_machine_out_of_budget(capsys):
    code, out, _ = run_cli(capsys, "machine", "run", "--program", '[{"op":"JZ","r":9,"target":0}]', "--budget", "50")
    assert code == 0 and json.loads(out) == {"halted": False, "budget": 50}


def test_explore_e_json_lines(capsys):
    code, out, _ = run_cli(capsys, "classes", "explore-e", "--k", "2", "--l", "3", "--index-budget", "500", "--step-budget", "2000")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and recs[0] == {"e": 0, "k_e": 1, "s_e": 0, "o": [0], "u": 3, "support": [3]}


def test_member(capsys):
    assert run_cli(capsys, "classes", "member", "--k", "2", "--l", "3", "--support", "3")[1] == "true\n"
    assert run_cli(capsys, "classes", "member", "--k", "2", "--l", "3", "--support", "13,17")[1] == "false\n"
    assert run_cli(capsys, "classes", "member", "--class", '{"kind":"cube","k":3}', "--support", "1,2")[1] == "true\n"


def test_verify_witness(capsys):
    code, out, _ = run_cli(capsys, "vc", "verify-witness", "--hkl", "2", "3", "--domain", "8")
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run_cli(capsys, "vc", "verify-witness", "--class", '{"kind":"support_at_most","k":1}', "--erm-k", "1", "--domain", "5")
    assert code == 0
    # constant all-zeros program as a 1-witness is refuted by the zero hypothesis
    code, out, _ = run_cli(
        capsys, "vc", "verify-witness", "--class", '{"kind":"support_at_most","k":1}',
        "--witness-code", str(constant_program((0, 0))), "--witness-k", "1", "--domain", "3",
    )
    assert code == 1 and json.loads(out)["counterexample"] == {"tuple": [0, 1], "support": []}
    code, _, err = run_cli(
        capsys, "vc", "verify-witness", "--class", '{"kind":"support_at_most","k":1}',
        "--witness-code", str(constant_program((2, 2))), "--witness-k", "1", "--domain", "3",
    )
    assert code == 2 and "non-binary" in err
    assert run_cli(capsys, "vc", "verify-witness", "--domain", "3")[0] == 2


def test_witness_from_erm(capsys):
    code, out, _ = run_cli(capsys, "vc", "witness-from-erm", "--class", '{"kind":"support_at_most","k":1}', "--k", "1", "--points", "3,5")
    assert (code, json.loads(out)) == (0, [1, 1])


def test_diagonalize(capsys):
    code, out, _ = run_cli(capsys, "vc", "diagonalize", "--k", "2", "--l", "3", "--candidate-code", str(constant_program((1, 1, 1))))
    res = json.loads(out)
    assert code == 0 and len(res["tuple"]) == 3 and set(res["tuple"]) <= set(res["support"])
    loop = str(encode_program([Instr("JZ", 9, 0)]))
    code, out, _ = run_cli(capsys, "vc", "diagonalize", "--k", "2", "--l", "3", "--candidate-code", loop, "--step-budget", "100")
    assert code == 1 and json.loads(out)["budget_exceeded"]


def test_learn(capsys, tmp_path):
    sample = '{"pairs": [[3, 1], [5, 0], [3, 1]]}'
    assert json.loads(run_cli(capsys, "learn", "erm", "--sample", sample)[1]) == {"support": [3]}
    code, out, _ = run_cli(capsys, "learn", "srm", "--b", "1", "--sample", sample, "--emit-certificate")
    res = json.loads(out)
    assert code == 0 and res["certificate"]["N_bound"] == 3
    code, out, _ = run_cli(capsys, "learn", "nonuniform", "--sample", sample)
    assert code == 0 and "support" in json.loads(out)


def test_learn_malformed_sample(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"pairs": [[1, 2, 3]]}')
    code, _, err = run_cli(capsys, "learn", "srm", "--b", "1", "--sample", str(bad))
    assert code == 2 and "error" in err
    bad.write_text("not json")
    assert run_cli(capsys, "learn", "srm", "--b", "1", "--sample", str(bad))[0] == 2


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "vc", "dim", "--bogus")
    assert code == 2 and "usage" in err


def test_negative_budget_rejected(capsys):
    assert run_cli(capsys, "machine", "run", "--code", "0", "--budget", "-1")[0] == 2


def test_harness_pac_pass_and_fail(capsys):
    code, out, err = run_cli(capsys, "harness", "pac", "--distribution", D3, "--a", "4", "--b", "4", "--m", "20", "--trials", "200")
    assert code == 0 and json.loads(out)["pass"] and "pass" in err
    code, out, _ = run_cli(capsys, "harness", "pac", "--distribution", D3, "--a", "4", "--b", "4", "--m", "1", "--trials", "200")
    assert code == 1 and not json.loads(out)["pass"]


def test_harness_seed_from_env(capsys, monkeypatch):
    args = ["harness", "hoeffding", "--distribution", '{"atoms":[[[0,1],"1/2"],[[1,0],"1/2"]]}', "--m", "8", "--b", "1", "--trials", "300"]
    explicit = run_cli(capsys, *args, "--seed", "7")[1]
    monkeypatch.setenv("CPACLAB_SEED", "7")
    assert run_cli(capsys, *args)[1] == explicit
    monkeypatch.setenv("CPACLAB_SEED", "x")
    assert run_cli(capsys, *args)[0] == 2


def test_harness_nonuniform(capsys):
    code, out, _ = run_cli(capsys, "harness", "nonuniform", "--distribution", D3, "--a", "2", "--b", "2", "--n-h", "1", "--trials", "100")
    assert code == 0 and json.loads(out)["m"] == 128


def test_harness_curve_csv(capsys):
    cfg = json.dumps({"learner": "erm_hfin", "distribution": json.loads(D3), "a": 4, "b": 4, "grid": [1, 2, 5], "trials": 200})
    code, out, _ = run_cli(capsys, "harness", "curve", "--config", cfg)
    lines = out.splitlines()
    assert lines[0] == "m,freq,threshold,pass" and len(lines) == 4
    assert code == 1 and lines[1].endswith(",false")
    assert run_cli(capsys, "harness", "curve", "--config", '{"learner": "erm_hfin"}')[0] == 2
