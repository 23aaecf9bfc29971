"""Prompt template loading and placeholder substitution.

Templates live as package data with <ANGLE_BRACKET> placeholders.
Rendering is a single pass: inserted values are never rescanned, so no
value can smuggle a placeholder into the prompt.  User-supplied values
additionally get their '<' escaped, keeping rendered prompts unambiguous
even when a prompt quotes placeholder-like text.
"""

from __future__ import annotations

import re
from importlib import resources

_TEMPLATE_CACHE: dict[str, str] = {}

AGENT_NAMES = ("enhance", "generate", "check")


def load_template(name: str) -> str:
    if name not in _TEMPLATE_CACHE:
        ref = resources.files("sonoviz.agents").joinpath(f"templates/{name}.txt")
        _TEMPLATE_CACHE[name] = ref.read_text(encoding="utf-8")
    return _TEMPLATE_CACHE[name]


def load_dsl_reference() -> str:
    ref = resources.files("sonoviz.script").joinpath("reference.md")
    return ref.read_text(encoding="utf-8")


def escape_value(value: str) -> str:
    return value.replace("<", "\\<")


def render(template: str, escaped: dict[str, str], raw: dict[str, str] | None = None) -> str:
    """Fill <KEY> placeholders in one pass.

    `escaped` holds user-controlled values ('<' gets backslash-escaped);
    `raw` holds engine-controlled text like the language reference.  Every
    key must appear in the template at least once.
    """
    values = {key: escape_value(value) for key, value in escaped.items()}
    if raw:
        values.update(raw)
    for key in values:
        if f"<{key}>" not in template:
            raise KeyError(f"template has no placeholder <{key}>")
    pattern = re.compile("<(" + "|".join(re.escape(k) for k in values) + ")>")
    return pattern.sub(lambda m: values[m.group(1)], template)
