import json
from functools import lru_cache
from importlib import resources

from apktheory.pipeline import analyze, build
from apktheory.substitution import parse_rule

BUILTINS = ("fibonacci", "silver-mean", "solenoid", "half-hex", "chair")
# shipped, but too slow for every test; the acceptance stretch line runs them
SLOW_BUILTINS = ("robinson", "tuebingen")


def rule_text(name: str) -> str:
    return (resources.files("apktheory") / "rules" / f"{name}.json").read_text()


@lru_cache(maxsize=None)
def builtin(name: str):
    return parse_rule(rule_text(name))


@lru_cache(maxsize=None)
def built(name: str, seed=None):
    return build(builtin(name), seed)


@lru_cache(maxsize=None)
def analyzed(name: str, seed=None):
    return analyze(builtin(name), seed)


def one_d(word_a, word_b, name="w"):
    doc = {"name": name, "dimension": 1,
           "prototiles": [{"label": "a", "word": list(word_a)}, {"label": "b", "word": list(word_b)}]}
    return parse_rule(json.dumps(doc))


def square_rule(children, name="sq"):
    doc = {"name": name, "dimension": 2,
           "prototiles": [{"label": "S", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
           "expansion": 2,
           "children": {"S": [{"label": "S", "translation": [str(x) for x in t]} for t in children]}}
    return json.dumps(doc)
