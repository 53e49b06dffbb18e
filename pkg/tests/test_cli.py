import json

import pytest

from heisenlab.cli import main, parse_field_spec, parse_h_element
from heisenlab.errors import UsageError
from heisenlab.fields import field_make
from heisenlab.heisenberg import hgroup


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_field_spec_parsing():
    assert parse_field_spec("F5") == field_make("prime", 5)
    assert parse_field_spec("F9:t^2+1") == field_make("extension", 3, 2, (1, 0, 1))
    assert parse_field_spec("F4") == field_make("extension", 2, 2)
    assert parse_field_spec("Q") == field_make("rationals")
    with pytest.raises(UsageError):
        parse_field_spec("F6")
    with pytest.raises(UsageError):
        parse_field_spec("bogus")


def test_element_literal_parsing(F9):
    G = hgroup(F9)
    g = parse_h_element(G, "([1,2],[0,1],[2,0])")
    assert g == G.element((1, 2), (0, 1), (2, 0))
    G3 = hgroup(field_make("prime", 3))
    assert parse_h_element(G3, "(1,0,2)") == G3.element(1, 0, 2)


def test_field_info_json(capsys):
    code, out, _ = run(capsys, "field-info", "--field", "F9", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["field"]["modulus"] == [1, 0, 1]
    assert data["order"] == 9


def test_group_check(capsys):
    code, out, _ = run(capsys, "group-check", "--field", "F3")
    assert code == 0
    assert "order 27" in out


def test_ext_build(capsys):
    code, out, _ = run(capsys, "ext-build", "--heisenberg", "F2")
    assert code == 0
    assert "order 8" in out


def test_ext_build_bad_cocycle(tmp_path, capsys, F2):
    from heisenlab.central_ext import AbGroup, Cocycle
    from heisenlab.jsonio import cocycle_to_json

    A = AbGroup.of_field(F2)
    B = AbGroup.of_field(F2)
    bad = Cocycle.from_func(A, B, lambda a, b: (a[0],))
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cocycle_to_json(bad)), encoding="utf-8")
    code, _, err = run(capsys, "ext-build", "--cocycle", str(path))
    assert code == 65
    assert "NotACocycle" in err


def test_aut_count_bruteforce(capsys):
    code, out, _ = run(capsys, "aut-count", "--field", "F2")
    assert code == 0
    assert "bruteforce: 8" in out


def test_aut_count_both(capsys):
    code, out, _ = run(capsys, "aut-count", "--field", "F2", "--method", "both", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["parametrized"] == data["bruteforce"] == 8


def test_aut_dump_deterministic(capsys):
    code1, out1, _ = run(capsys, "aut-dump", "--field", "F2", "--json")
    code2, out2, _ = run(capsys, "aut-dump", "--field", "F2", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["count"] == 8


def test_central_aut(capsys):
    code, out, _ = run(capsys, "central-aut", "--field", "F9", "--subfield", "F3")
    assert code == 0
    assert "fixes 27/27" in out


def test_psi_solve(capsys):
    code, out, _ = run(capsys, "psi-solve", "--field", "F3", "--coeff", "1", "--json")
    assert code == 0
    assert json.loads(out)["count"] == 3


def test_psi_extend(capsys):
    code, out, _ = run(capsys, "psi-extend", "--field", "F9", "--subfield", "F3",
                       "--coeff", "1")
    assert code == 0
    assert "identity verified" in out


def test_interpret_check(capsys):
    code, out, _ = run(capsys, "interpret", "--field", "F3", "--check")
    assert code == 0
    assert "PASS 27/27 triples" in out


def test_interpret_emit_tables(capsys):
    code, out, _ = run(capsys, "interpret", "--field", "F2", "--check",
                       "--emit-tables", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["mul_table"][1][1] == 1
    assert data["tables_match_field"] is True


def test_eval_exit_codes(tmp_path, capsys):
    code, out, _ = run(capsys, "eval", "--field", "F3",
                       "--text", "forall x . x * I = x")
    assert code == 0 and "True" in out
    code, out, _ = run(capsys, "eval", "--field", "F3",
                       "--text", "forall x y . [x,y] = I")
    assert code == 1 and "False" in out
    code, _, err = run(capsys, "eval", "--field", "F3", "--text", "forall x . x =")
    assert code == 2
    assert "SyntaxError" in err


def test_eval_with_assignment(capsys):
    code, _, _ = run(capsys, "eval", "--field", "F3",
                     "--text", "[u,v] = Z", "--assign", "Z=(0,0,1)")
    assert code == 0


def test_eval_formula_file(tmp_path, capsys):
    path = tmp_path / "formula.fo"
    path.write_text("exists x y . ~([x,y] = I)\n", encoding="utf-8")
    code, _, _ = run(capsys, "eval", "--field", "F2", "--formula", str(path))
    assert code == 0


def test_eval_budget_error(capsys):
    code, _, err = run(capsys, "eval", "--field", "F3",
                       "--text", "exists x y . x * y = u", "--budget", "7")
    assert code == 2
    assert "BudgetExceeded" in err


def test_compose_decompose_round_trip_via_files(tmp_path, capsys):
    hom_path = tmp_path / "hom.json"
    code, out, _ = run(capsys, "compose", "--source", "F3", "--target", "F9",
                       "--theta", "canonical", "--json", "--out", str(hom_path))
    assert code == 0
    code, out, _ = run(capsys, "decompose", "--hom", str(hom_path), "--json")
    assert code == 0
    data = json.loads(out)
    assert data["verified"] is True
    assert data["d"] == [1, 0]


def test_decompose_corrupted_table(tmp_path, capsys):
    from heisenlab.decompose import GroupHomTable, h_functor
    from heisenlab.fields import FieldHom
    from heisenlab.jsonio import group_hom_to_json

    F3 = field_make("prime", 3)
    ident = h_functor(FieldHom.from_func(F3, F3, lambda x: x))
    images = list(ident.images)
    images[5], images[7] = images[7], images[5]
    broken = GroupHomTable(ident.source, ident.target, images, check=False)
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(group_hom_to_json(broken)), encoding="utf-8")
    code, _, err = run(capsys, "decompose", "--hom", str(path))
    assert code == 65
    assert "InvalidHomomorphism" in err
    assert "witness" in err


def test_usage_errors(capsys):
    code, _, err = run(capsys, "field-info", "--field", "F6")
    assert code == 64
    code, _, err = run(capsys, "eval", "--field", "F3")
    assert code == 64
    code, _, err = run(capsys, "compose", "--source", "F3", "--target", "F4",
                       "--theta", "canonical")
    assert code == 65  # characteristic mismatch is a domain error
    assert "CharacteristicMismatch" in err


def test_json_reports_are_deterministic(capsys):
    _, out1, _ = run(capsys, "interpret", "--field", "F3", "--check", "--json")
    _, out2, _ = run(capsys, "interpret", "--field", "F3", "--check", "--json")
    assert out1 == out2


def test_assignment_with_spaces_and_lists(F9):
    from heisenlab.cli import parse_assignment

    G = hgroup(F9)
    asg = parse_assignment(G, "X = (0, 0, [1,2]), Y=([0,1],0,0)")
    assert asg["X"] == G.element(0, 0, (1, 2))
    assert asg["Y"] == G.element((0, 1), 0, 0)


def test_aut_params_json_round_trip(F9):
    from heisenlab.automorphisms import AutParams, aut_make, solve_quadratic_additive
    from heisenlab.jsonio import aut_params_from_json, aut_params_to_json

    two = F9.element(2)
    t = F9.from_coeffs((0, 1))
    psi1 = solve_quadratic_additive(F9, two * t)[5]
    psi2 = solve_quadratic_additive(F9, F9.one)[9]
    params = AutParams(F9, two, F9.one, t, F9.one, psi1, psi2)
    back = aut_params_from_json(F9, aut_params_to_json(params))
    G = hgroup(F9)
    assert aut_make(G, back).values == aut_make(G, params).values
