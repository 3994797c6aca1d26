"""JSON game-spec documents.

Rationals are always strings (``"4/7"``, ``"0.4382"``); output labels are a
string or a ``[string, tag]`` pair; channels are keyed by ``"d|a"``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .channel import Channel, ChannelError, Prior
from .games import GameSpec, GameSpecError
from .numerics import RationalParseError, format_rational, parse_rational
from .vulnerability import BAYES, Bayes, GainFunction


class SpecParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _label(value: Any, path: str):
    if isinstance(value, list):
        return tuple(_label(v, f"{path}[{i}]") for i, v in enumerate(value))
    if isinstance(value, (str, int)) and not isinstance(value, bool):
        return value
    raise SpecParseError(path, f"labels must be strings, integers or lists, got {value!r}")


def _label_json(label):
    if isinstance(label, tuple):
        return [_label_json(v) for v in label]
    return label


def _rational(value: Any, path: str) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise SpecParseError(path, f"rationals must be strings such as \"1/3\", got {value!r}")
    try:
        return parse_rational(value)
    except RationalParseError as exc:
        raise SpecParseError(path, str(exc)) from None


def _matrix(value: Any, path: str, n_rows: int, n_cols: int) -> list[list[Fraction]]:
    if not isinstance(value, list) or len(value) != n_rows:
        raise SpecParseError(path, f"expected {n_rows} rows")
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != n_cols:
            raise SpecParseError(f"{path}[{i}]", f"expected {n_cols} entries")
        out.append([_rational(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return out


def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise SpecParseError(key, "missing field")
    return doc[key]


def _label_list(doc: dict, key: str) -> tuple:
    value = _require(doc, key)
    if not isinstance(value, list) or not value:
        raise SpecParseError(key, "expected a non-empty list")
    labels = tuple(_label(v, f"{key}[{i}]") for i, v in enumerate(value))
    if len(set(labels)) != len(labels):
        raise SpecParseError(key, "duplicate labels")
    return labels


def action_text(act) -> str:
    return act if isinstance(act, str) else json.dumps(_label_json(act))


def _action_index(actions: tuple, key: str) -> dict:
    index = {}
    for i, act in enumerate(actions):
        text = action_text(act)
        if "|" in text:
            raise SpecParseError(f"{key}[{i}]", "action labels may not contain '|'")
        if text in index:
            raise SpecParseError(f"{key}[{i}]", f"action {text!r} is ambiguous")
        index[text] = act
    return index


def action_key(d, a) -> str:
    return f"{action_text(d)}|{action_text(a)}"


def spec_from_dict(doc: Any) -> GameSpec:
    if not isinstance(doc, dict):
        raise SpecParseError("$", "spec document must be a JSON object")
    secrets = _label_list(doc, "secrets")
    outputs = _label_list(doc, "outputs")
    D = _label_list(doc, "defender_actions")
    A = _label_list(doc, "attacker_actions")
    prior_raw = _require(doc, "prior")
    if not isinstance(prior_raw, list) or len(prior_raw) != len(secrets):
        raise SpecParseError("prior", f"expected {len(secrets)} probabilities")
    probs = [_rational(v, f"prior[{i}]") for i, v in enumerate(prior_raw)]
    try:
        prior = Prior(secrets, tuple(probs))
    except ChannelError as exc:
        raise SpecParseError("prior", str(exc)) from None

    d_index, a_index = _action_index(D, "defender_actions"), _action_index(A, "attacker_actions")
    raw_channels = _require(doc, "channels")
    if not isinstance(raw_channels, dict):
        raise SpecParseError("channels", "expected an object keyed by \"d|a\"")
    channels = {}
    for key, mat in raw_channels.items():
        path = f"channels.{key}"
        parts = key.split("|")
        if len(parts) != 2 or parts[0] not in d_index or parts[1] not in a_index:
            raise SpecParseError(path, "key must be \"<defender action>|<attacker action>\"")
        rows = _matrix(mat, path, len(secrets), len(outputs))
        try:
            channels[(d_index[parts[0]], a_index[parts[1]])] = Channel(
                secrets, outputs, tuple(tuple(r) for r in rows)
            )
        except ChannelError as exc:
            raise SpecParseError(path, str(exc)) from None

    measure_raw = doc.get("measure", "bayes")
    if measure_raw == "bayes":
        measure = BAYES
    elif isinstance(measure_raw, dict):
        guesses = _label_list(measure_raw, "guesses") if "guesses" in measure_raw else None
        if guesses is None:
            raise SpecParseError("measure.guesses", "missing field")
        gains = _matrix(measure_raw.get("gains"), "measure.gains", len(guesses), len(secrets))
        measure = GainFunction(guesses, secrets, tuple(tuple(r) for r in gains))
    else:
        raise SpecParseError("measure", "expected \"bayes\" or {\"guesses\": ..., \"gains\": ...}")

    try:
        return GameSpec(D, A, channels, prior, measure)
    except GameSpecError as exc:
        raise SpecParseError("channels", str(exc)) from None


def spec_to_dict(spec: GameSpec) -> dict:
    def mat(rows):
        return [[format_rational(v) for v in row] for row in rows]

    doc = {
        "secrets": [_label_json(x) for x in spec.secrets],
        "outputs": [_label_json(y) for y in spec.outputs],
        "prior": [format_rational(p) for p in spec.prior.probs],
        "defender_actions": [_label_json(d) for d in spec.defender_actions],
        "attacker_actions": [_label_json(a) for a in spec.attacker_actions],
        "channels": {
            action_key(d, a): mat(spec.channel(d, a).rows)
            for d in spec.defender_actions
            for a in spec.attacker_actions
        },
    }
    if isinstance(spec.measure, Bayes):
        doc["measure"] = "bayes"
    else:
        doc["measure"] = {
            "guesses": [_label_json(w) for w in spec.measure.guesses],
            "gains": mat(spec.measure.gains),
        }
    return doc


def load_spec(path: str | Path) -> GameSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecParseError(str(path), f"cannot read file: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return spec_from_dict(doc)


def dump_spec(spec: GameSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")
