import json
import os
import subprocess
import sys

import pytest
from jsonschema import validate

from confluence_lab.cli import run
from confluence_lab.terms import from_json, parse, pretty

TERM = {
    "$id": "term",
    "oneOf": [
        {"type": "object", "required": ["var"], "additionalProperties": False,
         "properties": {"var": {"type": "integer", "minimum": 0}}},
        {"type": "object", "required": ["lam"], "additionalProperties": False,
         "properties": {"lam": {"$ref": "term"}}},
        {"type": "object", "required": ["app"], "additionalProperties": False,
         "properties": {"app": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "term"}}}},
    ],
}
TRACE = {"type": "object", "required": ["steps"], "additionalProperties": False,
         "properties": {"steps": {"type": "array", "minItems": 1, "items": {"$ref": "term"}}}}
PRETTY = {"type": "object", "required": ["peak", "left", "right"],
          "properties": {k: {"type": "string"} for k in ("peak", "left", "right")}}
CEX = {
    "$defs": {"term": TERM},
    "type": "object",
    "required": ["peak", "left", "right", "relation", "height_bound", "pretty"],
    "properties": {
        "peak": {"$ref": "term"}, "left": {"$ref": "term"}, "right": {"$ref": "term"},
        "relation": {"type": "string"}, "height_bound": {"type": "integer"}, "pretty": PRETTY,
    },
}
REPORT = {
    "$defs": {"term": TERM},
    "type": "object",
    "required": ["property", "relations", "corpus", "outcome", "instances_checked", "elapsed_ms"],
    "properties": {
        "property": {"enum": ["diamond", "strong-commutation", "commutation", "confluence", "strip"]},
        "relations": {"type": "array", "items": {"type": "string"}},
        "corpus": {"type": "object", "required": ["height_bound"]},
        "outcome": {"enum": ["pass", "fail", "inconclusive"]},
        "instances_checked": {"type": "integer", "minimum": 0},
        "elapsed_ms": {"type": "integer", "minimum": 0},
        "counterexample": {
            "type": "object",
            "required": ["peak", "left", "right", "left_trace", "right_trace", "reason", "pretty"],
            "properties": {"peak": {"$ref": "term"}, "left": {"$ref": "term"}, "right": {"$ref": "term"},
                           "left_trace": TRACE, "right_trace": TRACE, "reason": {"type": "string"},
                           "pretty": PRETTY},
        },
    },
}
JOIN = {"$defs": {"term": TERM}, "type": "object", "required": ["witness", "left", "right"],
        "properties": {"witness": {"$ref": "term"}, "left": TRACE, "right": TRACE}}

PEAK = r"(\x. x x) ((\y. y) (\y. y))"


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def call_json(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    return code, json.loads(out)


def drop_elapsed(payload):
    return {k: v for k, v in payload.items() if k != "elapsed_ms"}


# -- counterexamples and checks ------------------------------------------------------


def test_cex_beta_reports_the_known_witness(capsys):
    code, data = call_json(capsys, "cex", "diamond", "--rel", "beta", "--height", "3")
    assert code == 1
    validate(data, CEX)
    assert from_json(data["peak"]) == parse(PEAK)
    assert from_json(data["left"]) == parse(r"((\y.y) (\y.y)) ((\y.y) (\y.y))")
    assert from_json(data["right"]) == parse(r"(\x. x x) (\y.y)")
    assert data["pretty"]["peak"] == r"(\x. x x) ((\x. x) (\x. x))"


def test_cex_par_finds_nothing(capsys):
    code, data = call_json(capsys, "cex", "diamond", "--rel", "par", "--height", "3")
    assert code == 0 and data["outcome"] == "none-found"


def test_cex_typed_eta(capsys):
    code, data = call_json(capsys, "cex", "diamond", "--rel", "typed-eta-ext", "--height", "3",
                           "--tctx", "p:Unit*Unit")
    assert code == 1
    assert data["pretty"] == {"peak": "<fst p, snd p>", "left": "p", "right": "<(), snd p>"}


def test_check_diamond_par_passes(capsys):
    code, data = call_json(capsys, "check", "diamond", "--rel", "par", "--height", "3")
    assert code == 0
    validate(data, REPORT)
    assert data["outcome"] == "pass" and "counterexample" not in data


def test_check_diamond_beta_fails(capsys):
    code, data = call_json(capsys, "check", "diamond", "--rel", "beta", "--height", "3")
    assert code == 1
    validate(data, REPORT)
    assert from_json(data["counterexample"]["peak"]) == parse(PEAK)


@pytest.mark.parametrize("prop, rel", [
    ("strong-comm", "eta,eta"), ("comm", "beta,eta"), ("confluence", "beta+eta"), ("strip", "par"),
])
def test_check_other_properties(capsys, prop, rel):
    code, data = call_json(capsys, "check", prop, "--rel", rel, "--height", "3", "--ctx", "x")
    assert code == 0
    validate(data, REPORT)


def test_check_inconclusive_exit_code(capsys):
    code, data = call_json(capsys, "check", "confluence", "--rel", "beta", "--height", "3",
                           "--ctx", "x", "--depth", "1", "--nodes", "3")
    assert code == 3
    validate(data, REPORT)
    assert data["outcome"] == "inconclusive" and data["inconclusive_instances"] > 0


def test_check_typed_confluence_fails(capsys):
    code, data = call_json(capsys, "check", "confluence", "--rel", "typed-eta-ext", "--height", "3",
                           "--tctx", "p:Unit*Unit")
    assert code == 1 and data["outcome"] == "fail"


# -- term commands ---------------------------------------------------------------------------


def test_develop(capsys):
    code, out, _ = call(capsys, "develop", PEAK)
    assert code == 0 and out.strip() == r"(\x. x) (\x. x)"


def test_parse(capsys):
    code, data = call_json(capsys, "parse", r"\x. f x", "--ctx", "f")
    assert code == 0
    assert data == {"term": {"lam": {"app": [{"var": 1}, {"var": 0}]}}, "pretty": r"\x. f x"}


def test_reducts(capsys):
    code, out, _ = call(capsys, "reducts", PEAK, "--rel", "beta")
    assert code == 0
    assert out.splitlines() == [r"(\x. x) (\x. x) ((\x. x) (\x. x))", r"(\x. x x) (\x. x)"]


def test_par_reducts_json(capsys):
    code, data = call_json(capsys, "par-reducts", r"(\x. x) y", "--ctx", "y")
    assert code == 0
    validate(data, {"$defs": {"term": TERM}, "type": "array", "items": {"$ref": "term"}})
    assert [pretty(from_json(t), ["y"]) for t in data] == [r"(\x. x) y", "y"]


def test_normalize(capsys):
    assert call(capsys, "normalize", PEAK, "--rel", "beta")[:2] == (0, "\\x. x\n")
    code, out, _ = call(capsys, "normalize", r"(\x. x x) (\x. x x)", "--rel", "beta", "--fuel", "5")
    assert code == 1 and out.startswith("fuel exhausted")


def test_join(capsys):
    code, data = call_json(capsys, "join", r"(\x. x) (\x. x) ((\x. x) (\x. x))", r"(\x. x x) (\x. x)",
                           "--rel", "beta")
    assert code == 0
    validate(data, JOIN)
    assert pretty(from_json(data["witness"])) == r"(\x. x) (\x. x)"
    code, data = call_json(capsys, "join", "x", "y", "--rel", "beta", "--ctx", "x,y")
    assert code == 1 and data["outcome"] == "not-found-within-budget"


def test_typecheck(capsys):
    code, out, _ = call(capsys, "typecheck", r"/\a. \x:a. x")
    assert code == 0 and out.strip() == "forall a. a -> a"
    code, out, err = call(capsys, "typecheck", r"(\x:b. x) (/\a. \y:a. y)", "--tctx", "b")
    assert code == 1 and "type error" in err


def test_typed_develop(capsys):
    code, out, _ = call(capsys, "develop", r"(/\a. \x:a. x) [b]", "--tctx", "b")
    assert code == 0 and out.strip() == r"\x:b. x"


def test_gen(capsys):
    assert call(capsys, "gen", "--height", "3", "--count")[:2] == (0, "51\n")
    assert call(capsys, "gen", "--height", "4", "--ctx", "x", "--count")[1] == "612264\n"
    code, out, _ = call(capsys, "gen", "--height", "1")
    assert out == "\\x. x\n"


# -- usage errors -------------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["check", "diamond", "--height", "3"],
    ["check", "diamond", "--rel", "gamma", "--height", "3"],
    ["check", "comm", "--rel", "beta", "--height", "3"],
    ["check", "diamond", "--rel", "beta"],
    ["check", "diamond", "--rel", "beta", "--height", "3", "--depth", "0"],
    ["parse", r"(\x. x"],
    ["parse", "z", "--ctx", "x"],
    ["parse", "x", "--ctx", "x,x"],
    ["reducts", "z", "--rel", "typed-beta", "--tctx", "b"],
    ["reducts", "x", "--rel", "beta", "--tctx", "b, x:b"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


# -- process level ------------------------------------------------------------------------------


def invoke(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "confluence_lab", *argv], capture_output=True, text=True, env=env)


def test_exit_codes_at_process_level():
    assert invoke("cex", "diamond", "--rel", "beta", "--height", "3").returncode == 1
    assert invoke("check", "diamond", "--rel", "par", "--height", "3").returncode == 0
    assert invoke("check", "diamond").returncode == 2


def test_output_is_deterministic_modulo_elapsed():
    argv = ("check", "confluence", "--rel", "beta", "--height", "3", "--ctx", "x")
    first = invoke(*argv)
    env = dict(os.environ, CONFLUENCE_LAB_THREADS="3")
    second = invoke(*argv, env=env)
    assert drop_elapsed(json.loads(first.stdout)) == drop_elapsed(json.loads(second.stdout))
    a = invoke("cex", "diamond", "--rel", "beta", "--height", "3").stdout
    b = invoke("cex", "diamond", "--rel", "beta", "--height", "3", env=env).stdout
    assert a == b
