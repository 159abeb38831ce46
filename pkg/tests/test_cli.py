"""Command-line interface: outputs, exit codes, audit, determinism."""

import pytest

from multival.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_val_and_residue(capsys):
    code, out, _ = run(capsys, "val", "--val", "Q:5", "--elem", "50/3")
    assert code == 0 and "VAL: 2" in out
    code, out, _ = run(capsys, "residue", "--val", "Qi:2+1*i", "--elem", "i")
    assert code == 0 and "RESIDUE: 3" in out
    code, out, _ = run(capsys, "residue", "--val", "Qi:2-1*i", "--elem", "i")
    assert code == 0 and "RESIDUE: 2" in out


def test_approx_and_audit(capsys):
    code, out, _ = run(capsys, "approx",
                       "--target", "Q:2:x-0>=2",
                       "--target", "Q:3:x-1>=2",
                       "--target", "Q:5:x-2>=2",
                       "--audit")
    assert code == 0
    assert "RESULT: 352" in out
    assert "AUDIT: 3/3 witnesses re-verified" in out


def test_approx_target_forms(capsys):
    code, out, _ = run(capsys, "approx", "--target", "Q:2>1")
    assert code == 0
    code, out, _ = run(capsys, "approx", "--target", "Q:2=-1",
                       "--target", "Q:3>=0")
    assert code == 0
    code, _, err = run(capsys, "approx", "--target", "nonsense")
    assert code == 1 and "error" in err


def test_scramble(capsys):
    code, out, _ = run(capsys, "scramble", "--vals", "Q:5",
                       "--tuple", "5;1", "--audit")
    assert code == 0
    assert "FINAL: 4; 1" in out
    assert "VERIFIED: true" in out
    assert "AUDIT: 1/1" in out


def test_ring_predicates(capsys):
    spec = "glued(Qi:2+1*i,Qi:2-1*i,id)"
    code, out, _ = run(capsys, "ring", "--spec", spec, "contains", "i")
    assert code == 2 and "CONTAINS: false" in out
    code, out, _ = run(capsys, "ring", "--spec", spec, "contains", "5*i")
    assert code == 0 and "CONTAINS: true" in out
    code, out, _ = run(capsys, "ring", "--spec", spec, "local?")
    assert code == 0 and "LOCAL_RING: true (residue_dichotomy)" in out
    code, out, _ = run(capsys, "ring", "--spec", spec,
                       "independent", "1;i")
    assert code == 0 and "INDEPENDENT: true" in out
    code, out, _ = run(capsys, "ring", "--spec", "mv(Qi:2+1*i,Qi:2-1*i)",
                       "independent", "1;i")
    assert code == 2 and "INDEPENDENT: false" in out
    code, out, _ = run(capsys, "ring", "--spec", spec,
                       "integral-witness", "i", "--audit")
    assert code == 0
    assert "INTEGRAL_WITNESS: t^2 + (1)" in out
    assert "AUDIT: 1/1" in out


def test_ring_membership_and_embeds(capsys):
    code, out, _ = run(capsys, "ring", "--spec", "mv(Q:2,Q:3)",
                       "member", "6;2;3", "--audit")
    assert code == 0 and "MEMBER: true" in out
    code, out, _ = run(capsys, "ring", "--spec", "mv(Q:2,Q:3)",
                       "embeds", "mv(Q:2)")
    assert code == 0 and "EMBEDS: true" in out
    code, out, _ = run(capsys, "ring", "--spec", "mv(Q:2)",
                       "embeds", "mv(Q:2,Q:3)", "--audit")
    assert code == 2 and "EMBEDS: false" in out
    assert "AUDIT: 1/1" in out


def test_topo_actions(capsys):
    code, out, _ = run(capsys, "topo", "--spec", "mv(Q:2,Q:3)", "local?",
                       "--audit")
    assert code == 2 and "LOCAL_TOPOLOGY: false (escape_family)" in out
    assert "AUDIT: 4/4" in out
    code, out, _ = run(capsys, "topo", "--spec", "mv(Q:2,Q:3)", "components")
    assert code == 0 and out.count("COMPONENT:") == 2
    code, out, _ = run(capsys, "topo", "--spec",
                       "glued(Qi:2+1*i,Qi:2-1*i,id)", "components")
    assert code == 0 and "FLAG: local_ring_nonlocal_topology" in out
    code, out, _ = run(capsys, "topo", "--spec", "mv(Q:2,Q:3)",
                       "v-coarsenings")
    assert code == 0 and out.count("V_COARSENING:") == 2
    code, out, _ = run(capsys, "topo", "--spec", "mv(Q:2,Q:3)",
                       "indep-sum", "--trials", "3", "--seed", "4")
    assert code == 0 and "RESULT: pass" in out
    code, out, _ = run(capsys, "topo", "--spec", "mv(Q:2)", "assoc",
                       "--trials", "2")
    assert code == 0 and "RESULT: pass" in out


def test_locsent_check_and_eval(tmp_path, capsys):
    f = tmp_path / "s.loc"
    f.write_text("forall U exists x != 0 (x in U)\n")
    code, out, _ = run(capsys, "locsent", "check", str(f))
    assert code == 0 and "POLARITY: ok" in out
    f.write_text("exists U forall x (x in U)\n")
    code, out, _ = run(capsys, "locsent", "check", str(f))
    assert code == 2 and "POLARITY: violation" in out
    f.write_text("forall x (x = 0 or x != 0)\n")
    code, out, _ = run(capsys, "locsent", "eval", str(f),
                       "--spec", "mv(Q:2)")
    assert code == 0 and "VERDICT: Holds" in out
    code, out, _ = run(capsys, "locsent", "eval", str(f),
                       "--spec", "mv(Q:2)", "--height", "99")
    assert code == 0 and "NOTE: height clamped to 12" in out
    f.write_text("forall x (x = 0)\n")
    code, out, _ = run(capsys, "locsent", "eval", str(f),
                       "--spec", "mv(Q:2)")
    assert code == 2 and "VERDICT: Fails" in out
    code, _, err = run(capsys, "locsent", "eval", str(f))
    assert code == 1  # --spec is required for eval
    f.write_text("forall x (x in $)\n")
    code, _, err = run(capsys, "locsent", "check", str(f))
    assert code == 1 and "error" in err


def test_locality_sentence_verdicts(tmp_path, capsys):
    from multival import LOCALITY_SENTENCE_TEXT
    f = tmp_path / "loc.loc"
    f.write_text(LOCALITY_SENTENCE_TEXT + "\n")
    code, out, _ = run(capsys, "locsent", "eval", str(f),
                       "--spec", "mv(Q:2)")
    assert code == 0 and "VERDICT: Holds" in out
    code, out, _ = run(capsys, "locsent", "eval", str(f),
                       "--spec", "mv(Q:2,Q:3)")
    assert code == 2 and "VERDICT: Fails" in out


def test_demo_ww_audited_and_deterministic(capsys):
    code, out1, _ = run(capsys, "demo", "ww", "--audit")
    assert code == 0
    assert "LOCAL_RING: true" in out1
    assert "INDEPENDENT: (1; i) -> true" in out1
    assert "INTEGRAL_WITNESS: i -> t^2 + (1)" in out1
    assert "INTEGRAL_WITNESS: 2+1*i -> t^2 - (4)*t + (5)" in out1
    assert "LOCAL_TOPOLOGY: false" in out1
    assert "AUDIT-FAIL" not in out1
    code, out2, _ = run(capsys, "demo", "ww", "--audit")
    assert out1 == out2


def test_demo_decompose_golden(capsys):
    code, out1, _ = run(capsys, "demo", "decompose", "--audit",
                        "--trials", "3")
    assert code == 0
    assert "WITNESS: x=352" in out1
    assert "RESULT: pass" in out1
    assert "AUDIT-FAIL" not in out1
    code, out2, _ = run(capsys, "demo", "decompose", "--audit",
                        "--trials", "3")
    assert out1 == out2
    # a different seed changes the trial transcript
    code, out3, _ = run(capsys, "demo", "decompose", "--trials", "3",
                        "--seed", "1")
    assert "WITNESS: x=352" in out3
    assert out3 != out1


def test_usage_errors(capsys):
    code, _, _ = run(capsys, "nonsense")
    assert code == 1
    code, _, err = run(capsys, "ring", "--spec", "mv(Q:4)", "contains", "1")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "ring", "--spec", "mv(Q:2)", "frobnicate", "1")
    assert code == 1
