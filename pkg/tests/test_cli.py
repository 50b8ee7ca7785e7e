from __future__ import annotations

import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from virteuler.cli import cli
from virteuler.genfunc import KappaTable


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args, **kw):
    return runner.invoke(cli, args, auto_envvar_prefix="VIRTEULER", **kw)


class TestKappa:
    def test_gaussian_closed_form(self, runner):
        result = invoke(runner, ["kappa", "--ensemble", "gaussian", "--route", "closed-form",
                                 "--gmax", "2", "--smax", "3"])
        assert result.exit_code == 0
        assert "kappa[g=1, s=1] = -1/12" in result.output

    def test_legendre_stated_lemma(self, runner):
        result = invoke(runner, ["kappa", "--ensemble", "legendre", "--route", "stated-lemma",
                                 "--gmax", "3", "--format", "csv"])
        assert result.output.splitlines()[1:] == ["2,1,-1/4", "4,1,1/32", "6,1,-1/64"]

    def test_goe_half_integer(self, runner):
        result = invoke(runner, ["kappa", "--ensemble", "goe", "--gmax-half", "3", "--smax", "4",
                                 "--format", "json"])
        table = KappaTable.from_json(result.output)
        assert table.value(Fraction(1, 2), 2) == Fraction(1, 4)

    def test_json_round_trip_and_schema(self, runner):
        result = invoke(runner, ["kappa", "--gmax", "3", "--smax", "5", "--format", "json"])
        doc = json.loads(result.output)
        assert set(doc) == {"ensemble", "route", "convention", "entries", "meta"}
        assert all(isinstance(e["value"], str) for e in doc["entries"])
        assert json.loads(KappaTable.from_json(result.output).to_json()) == {**doc, "meta": doc["meta"]}

    def test_csv_and_json_agree(self, runner):
        js = KappaTable.from_json(invoke(runner, ["kappa", "--gmax", "3", "--format", "json"]).output)
        rows = invoke(runner, ["kappa", "--gmax", "3", "--format", "csv"]).output.strip().splitlines()[1:]
        assert {(int(a), int(b)): Fraction(c) for a, b, c in (r.split(",") for r in rows)} == js.entries

    def test_jobs_do_not_change_output(self, runner):
        args = ["kappa", "--route", "closed-form", "--gmax", "6", "--smax", "8", "--format", "csv"]
        assert invoke(runner, args).output == invoke(runner, args + ["--jobs", "4"]).output

    def test_tr_chain(self, runner):
        result = invoke(runner, ["kappa", "--ensemble", "gaussian", "--route", "tr-chain", "--gmax", "2"])
        assert "kappa[g=1, s=1] = 1/12" in result.output
        assert "kappa[g=2, s=1] = -1/120" in result.output

    def test_onept_chain_matches_sw_route(self, runner):
        a = invoke(runner, ["kappa", "--ensemble", "legendre", "--route", "onept-chain", "--gmax", "4",
                            "--format", "csv"]).output
        b = invoke(runner, ["kappa", "--ensemble", "legendre", "--gmax", "4", "--format", "csv"]).output
        assert a == b

    def test_invalid_combination_is_usage_error(self, runner):
        assert invoke(runner, ["kappa", "--ensemble", "goe", "--route", "sw-route"]).exit_code == 2
        assert invoke(runner, ["kappa", "--ensemble", "gaussian", "--route", "stated-lemma"]).exit_code == 2
        assert invoke(runner, ["kappa", "--ensemble", "klein"]).exit_code == 2
        assert invoke(runner, ["kappa", "--smax", "0"]).exit_code == 2

    def test_cap_is_resource_error(self, runner):
        assert invoke(runner, ["kappa", "--gmax", "99"]).exit_code == 3
        assert invoke(runner, ["kappa", "--route", "tr-chain", "--gmax", "4"]).exit_code == 3

    def test_env_prefix(self, runner):
        result = invoke(runner, ["kappa", "--format", "csv"], env={"VIRTEULER_KAPPA_G_MAX": "3"})
        assert "6,1," in result.output

    def test_output_file(self, runner, tmp_path):
        target = tmp_path / "k.json"
        result = invoke(runner, ["kappa", "--format", "json", "-o", str(target)])
        assert result.exit_code == 0 and result.output == ""
        assert KappaTable.from_json(target.read_text()).route == "sw-route"


class TestOnept:
    def test_sums(self, runner):
        result = invoke(runner, ["onept", "--table", "sums", "--gmax", "4", "--format", "csv"])
        assert result.output.splitlines() == ["g,value", "1,-1/2", "2,1/16", "3,-1/32", "4,17/512"]

    def test_epsilon_ode(self, runner):
        doc = json.loads(invoke(runner, ["onept", "--table", "epsilon", "--variant", "ode", "--gmax", "2",
                                         "--kmax", "2", "--format", "json"]).output)
        values = {(e["g"], e["k"]): e["value"] for e in doc["entries"]}
        assert values[(1, 1)] == "-1/2" and values[(2, 2)] == "-15/8"

    def test_r_table(self, runner):
        assert "g=2, n=1: 9/4" in invoke(runner, ["onept", "--table", "r", "--gmax", "2"]).output

    def test_printed_with_oracle_warns(self, runner):
        result = invoke(runner, ["onept", "--variant", "printed", "--check-oracle", "--gmax", "2", "--kmax", "2"])
        assert result.exit_code == 0
        assert "documented mismatch" in result.output

    def test_corrected_with_oracle_passes(self, runner):
        result = invoke(runner, ["onept", "--variant", "corrected", "--check-oracle", "--table", "f",
                                 "--format", "json"])
        assert result.exit_code == 0
        assert json.loads(result.output)["meta"]["oracle_check"] == "pass"


class TestVerify:
    def test_default_passes(self, runner):
        result = invoke(runner, ["verify", "--format", "json", "--jobs", "4"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output[result.output.index("{"):])
        statuses = {c["name"]: c["status"] for c in doc["checks"]}
        assert statuses["documented[printed_r_top]"] == "expected-mismatch"
        assert statuses["documented[printed_five_term]"] == "expected-mismatch"
        assert all(v == "pass" for k, v in statuses.items() if not k.startswith("documented"))

    def test_printed_variant_exits_zero_with_warning(self, runner):
        result = invoke(runner, ["verify", "--variant", "printed"])
        assert result.exit_code == 0
        assert "warning: printed five-term variant" in result.output
        assert "EXPECTED-MISMATCH  five_term_vs_oracle" in result.output

    def test_corrupted_bernoulli_cache_fails(self, runner, corrupted_bernoulli):
        result = invoke(runner, ["verify", "--format", "csv"])
        assert result.exit_code == 1
        line = next(l for l in result.output.splitlines() if l.startswith("bernoulli,"))
        assert line.split(",")[1] == "fail"

    def test_output_is_deterministic_across_jobs(self, runner):
        a = invoke(runner, ["verify", "--format", "csv"]).output
        b = invoke(runner, ["verify", "--format", "csv", "--jobs", "3"]).output
        assert a == b
