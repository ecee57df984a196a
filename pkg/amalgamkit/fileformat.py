from __future__ import annotations

import re
from logging import getLogger
from typing import NamedTuple

from . import ParseError
from .amalgam import AmalgamPresentation, FactorData, PresentationData
from .bass_serre.domain import FundamentalDomain
from .bass_serre.tree import render_vertex
from .constants import Budgets, Side
from .factors.finite import FiniteGroup
from .words import render_word

logger = getLogger(__name__)

_SECTION = re.compile(r"^\[\s*(factor\s+(?P<side>-?1)|amalgam|subgroup)\s*\]$")
_TABLE_ROW = re.compile(r"^(?P<left>[^*=\s]+)\s*\*\s*(?P<right>[^*=\s]+)\s*=\s*(?P<result>[^*=\s]+)$")
_ASSIGNMENT = re.compile(r"^(?P<key>[\w.\-]+)\s*=\s*(?P<value>.*)$")


class SubgroupSpec(NamedTuple):
    generators: list[str]
    overrides: dict[str, int]

    def budgets(self, base: Budgets) -> Budgets:
        return base._replace(**self.overrides)


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _split(value: str) -> list[str]:
    return [token.strip() for token in value.split(",") if token.strip()]


def parse_presentation(text: str, name: str = "") -> PresentationData:
    factors: dict[Side, FactorData] = {}
    c_names: list[str] = []
    images: dict[Side, list[str]] = {Side.PLUS: [], Side.MINUS: []}
    section: str | None = None
    current: FactorData | None = None
    for number, line in _lines(text):
        header = _SECTION.match(line)
        if header:
            if header.group("side"):
                side = Side.get(header.group("side"))
                if side in factors:
                    raise ParseError(f"factor {side.label} declared twice", number)
                current = factors[side] = FactorData(kind="", generators=[], line=number)
                section = "factor"
            else:
                section, current = header.group(1), None
            continue
        if section == "factor" and current is not None:
            row = _TABLE_ROW.match(line)
            if row:
                key = (row.group("left"), row.group("right"))
                if key in current.table:
                    raise ParseError(f"table row {line} repeats {key[0]} * {key[1]}", number)
                current.table[key] = row.group("result")
                continue
            if line == "table":
                continue
            assignment = _ASSIGNMENT.match(line)
            if not assignment:
                raise ParseError(f"malformed factor line: {line}", number)
            key, value = assignment.group("key"), assignment.group("value").strip()
            match key:
                case "kind":
                    current.kind = value
                case "generators":
                    current.generators = _split(value)
                case "order":
                    current.order = _split(value)
                case "elements":
                    current.elements = _split(value)
                case _:
                    raise ParseError(f"unknown factor key {key}", number)
        elif section == "amalgam":
            assignment = _ASSIGNMENT.match(line)
            if not assignment:
                raise ParseError(f"malformed amalgam line: {line}", number)
            key, value = assignment.group("key"), assignment.group("value").strip()
            match key:
                case "name":
                    name = name or value
                case "c":
                    c_names.append(value)
                case "image1" | "image-1":
                    side = Side.PLUS if key == "image1" else Side.MINUS
                    if len(images[side]) >= len(c_names):
                        raise ParseError(f"{key} without a preceding c line", number)
                    images[side].append(value)
                case _:
                    raise ParseError(f"unknown amalgam key {key}", number)
        elif section == "subgroup":
            continue
        else:
            raise ParseError(f"line outside of any section: {line}", number)
    for side in Side:
        if side not in factors:
            raise ParseError(f"missing [factor {side.label}] section")
        if not factors[side].kind:
            raise ParseError(f"factor {side.label} has no kind", factors[side].line)
    logger.debug("parsed presentation %s", name)
    return PresentationData(factors, c_names, images, name)


def parse_subgroup(text: str) -> SubgroupSpec:
    generators: list[str] = []
    overrides: dict[str, int] = {}
    in_section = False
    for number, line in _lines(text):
        header = _SECTION.match(line)
        if header:
            in_section = header.group(1) == "subgroup"
            continue
        if not in_section:
            continue
        assignment = _ASSIGNMENT.match(line)
        if not assignment:
            raise ParseError(f"malformed subgroup line: {line}", number)
        key, value = assignment.group("key"), assignment.group("value").strip()
        if key == "gen":
            generators.append(value)
        elif key.startswith("budget.") and key[len("budget."):] in Budgets._fields:
            try:
                overrides[key[len("budget."):]] = int(value)
            except ValueError:
                raise ParseError(f"budget {key} is not an integer: {value}", number) from None
        else:
            raise ParseError(f"unknown subgroup key {key}", number)
    return SubgroupSpec(generators, overrides)


def dump_presentation(P: AmalgamPresentation) -> str:
    lines = []
    for side in Side:
        factor = P.factor(side)
        lines.append(f"[factor {side.label}]")
        lines.append(f"kind = {factor.kind}")
        lines.append(f"generators = {','.join(factor.generators)}")
        lines.append(f"order = {','.join(factor.ordering.order_tokens())}")
        if isinstance(factor, FiniteGroup):
            lines.append(f"elements = {','.join(factor.names)}")
            lines.append("table")
            for g, left in enumerate(factor.names):
                for h, right in enumerate(factor.names):
                    lines.append(f"{left} * {right} = {factor.names[factor.multiply(g, h)]}")
        lines.append("")
    lines.append("[amalgam]")
    if P.name:
        lines.append(f"name = {P.name}")
    for j, c in enumerate(P.c_names):
        lines.append(f"c = {c}")
        lines.append(f"image1 = {render_word(P.image_words[Side.PLUS][j])}")
        lines.append(f"image-1 = {render_word(P.image_words[Side.MINUS][j])}")
    return "\n".join(lines) + "\n"


def dump_domain(D: FundamentalDomain) -> list[str]:
    """Line-oriented `kind: key = value` export of a fundamental domain"""
    P = D.presentation
    lines = [f"domain: certified = {str(D.certified).lower()}", f"domain: budgets = {D.budgets.describe()}"]
    for v in D.y1:
        lines.append(f"vertex: v{D.index(v)} = {render_vertex(P, v)} ; s = {P.render(D.s(v))}")
    for v in D.y1[1:]:
        label = P.render_syllable(v.label) if v.label is not None else "1"
        lines.append(f"edge: {D.tree_letter(v)} = {render_vertex(P, v)} ; label = {label}")
    for pairing in D.pairings:
        lines.append(f"pairing: {pairing.name} = {render_vertex(P, pairing.vertex)} ~ v{D.index(pairing.partner)} ; "
                     f"h = {render_word(pairing.h_word) or '1'}")
    for v in D.y1:
        group = D.groups[v]
        for name, g in zip(group.names, group.generators):
            lines.append(f"stabilizer: {name} = {group.factor.render(g)}")
    for j, expression in enumerate(D.expressions):
        lines.append(f"generator: h{j + 1} = {render_word(expression) or '1'}")
    lines.extend(f"diagnostic: {d}" for d in D.diagnostics)
    return lines
