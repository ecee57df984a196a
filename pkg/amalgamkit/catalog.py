from __future__ import annotations

from logging import getLogger
from typing import Callable, NamedTuple

from .amalgam import AmalgamPresentation, FactorData, PresentationData, validate_presentation
from .constants import Side
from .words import invert, parse_word, render_word

logger = getLogger(__name__)

_FIRST_POOL = "abefghijklmn"
_SECOND_POOL = "cdpquvwyzo"


class CatalogEntry(NamedTuple):
    name: str
    build: Callable[[], PresentationData]
    provenance: str
    expectations: tuple[tuple[str, Callable[[AmalgamPresentation], bool]], ...] = ()
    subgroup: tuple[str, ...] = ()

    def load(self) -> AmalgamPresentation:
        return validate_presentation(self.build())

    def check(self, P: AmalgamPresentation) -> list[str]:
        """Descriptions of the documented expectations that do not hold"""
        return [description for description, holds in self.expectations if not holds(P)]


def cyclic_factor(generator: str, order: int) -> FactorData:
    names = ["1", generator] + [f"{generator}{k}" for k in range(2, order)]
    table = {(names[i], names[j]): names[(i + j) % order] for i in range(order) for j in range(order)}
    return FactorData(kind="finite", generators=[generator], order=[generator, f"{generator}'"], elements=names, table=table)


def free_factor(generators: str | list[str]) -> FactorData:
    generators = list(generators)
    return FactorData(kind="free", generators=generators, order=[t for g in generators for t in (g, f"{g}'")])


def _letters_of(word: str) -> list[str]:
    names: list[str] = []
    for name, _ in parse_word(word):
        if name not in names:
            names.append(name)
    return names


def cyclic(m: int, n: int, k: int) -> PresentationData:
    """ℤ_m ∗_{ℤ_k} ℤ_n on generators s and r"""
    if m % k or n % k or k < 1:
        raise ValueError(f"k = {k} must divide both {m} and {n}")
    return PresentationData(
        factors={Side.PLUS: cyclic_factor("s", m), Side.MINUS: cyclic_factor("r", n)},
        c_names=["t"] if k > 1 else [],
        images={Side.PLUS: ["s" * (m // k)] if k > 1 else [], Side.MINUS: ["r" * (n // k)] if k > 1 else []},
        name=f"cyclic:{m},{n},{k}",
    )


def surface(genus: int) -> PresentationData:
    """Closed orientable surface group split along a separating curve"""
    if genus < 2 or 2 * (genus - genus // 2) > len(_SECOND_POOL):
        raise ValueError(f"genus {genus} is not available")
    first = genus // 2
    second = genus - first
    a = _FIRST_POOL[: 2 * first]
    c = _SECOND_POOL[: 2 * second]
    v = "".join(f"{a[2 * i]}{a[2 * i + 1]}{a[2 * i]}'{a[2 * i + 1]}'" for i in range(first))
    u = "".join(f"{c[2 * i]}{c[2 * i + 1]}{c[2 * i]}'{c[2 * i + 1]}'" for i in range(second))
    data = one_relator(v, u)
    data.name = "surface" if genus == 2 else f"surface:{genus}"
    return data


def one_relator(v: str, u: str) -> PresentationData:
    """⟨X, Y | v·u⟩ as F(X) ∗ F(Y) amalgamated along v = u⁻¹"""
    x, y = _letters_of(v), _letters_of(u)
    if not x or not y or set(x) & set(y):
        raise ValueError("v and u must be non-empty words over disjoint alphabets")
    return PresentationData(
        factors={Side.PLUS: free_factor(x), Side.MINUS: free_factor(y)},
        c_names=["t"],
        images={Side.PLUS: [v], Side.MINUS: [render_word(invert(parse_word(u)))]},
        name=f"one-relator:{v},{u}",
    )


def centralizer(word: str, power: int, letter: str = "x") -> PresentationData:
    """One extension-of-centralizers stage F(X) ∗_{word = x^power} ⟨x⟩"""
    names = _letters_of(word)
    if letter in names or power < 1:
        raise ValueError(f"{letter} must be a new letter and {power} positive")
    return PresentationData(
        factors={Side.PLUS: free_factor(names), Side.MINUS: free_factor([letter])},
        c_names=["t"],
        images={Side.PLUS: [word], Side.MINUS: [letter * power]},
        name=f"centralizer:{word},{power}",
    )


def _sl2z() -> PresentationData:
    data = cyclic(4, 6, 2)
    data.name = "sl2z"
    return data


def _centralizer() -> PresentationData:
    data = centralizer("ab", 2)
    data.name = "centralizer"
    return data


def _transversal_is(side: Side, expected: list[str]) -> Callable[[AmalgamPresentation], bool]:
    def holds(P: AmalgamPresentation) -> bool:
        factor = P.factor(side)
        return sorted(factor.render(t) for t in P.transversal(side, 3)) == sorted(expected)

    return holds


def _images_nontrivial(P: AmalgamPresentation) -> bool:
    return all(P.factor(side).length(image) > 0 for side in Side for image in P.images[side])


CATALOG: dict[str, CatalogEntry] = {
    entry.name: entry
    for entry in (
        CatalogEntry(
            "surface",
            lambda: surface(2),
            "genus-2 surface group F(a,b) amalgamated with F(c,d) along [a,b] = [c,d]⁻¹; "
            "one-relator amalgam of a word that is not a proper power",
            (("both images have infinite order", _images_nontrivial),),
            ("ab", "cd"),
        ),
        CatalogEntry(
            "sl2z",
            _sl2z,
            "SL(2,Z) = Z4 ∗_Z2 Z6; amalgam of finite groups over a finite subgroup",
            (
                ("T1 = {1, s}", _transversal_is(Side.PLUS, ["1", "s"])),
                ("T-1 = {1, r, r'}", _transversal_is(Side.MINUS, ["1", "r", "r'"])),
            ),
            ("sr",),
        ),
        CatalogEntry(
            "centralizer",
            _centralizer,
            "one extension-of-centralizers stage F(a,b) ∗_{ab = x²} ⟨x⟩; ab generates a maximal cyclic subgroup",
            (("both images have infinite order", _images_nontrivial),),
            ("b", "x"),
        ),
    )
}

_GENERATORS: dict[str, Callable[..., PresentationData]] = {
    "cyclic": lambda m, n, k: cyclic(int(m), int(n), int(k)),
    "surface": lambda genus: surface(int(genus)),
    "one-relator": one_relator,
    "centralizer": lambda word, power: centralizer(word, int(power)),
}


def get(name: str) -> CatalogEntry:
    """Look up a fixed entry (`sl2z`) or a parameterised one (`cyclic:4,6,2`)"""
    if name in CATALOG:
        return CATALOG[name]
    family, _, arguments = name.partition(":")
    if family in _GENERATORS and arguments:
        build = _GENERATORS[family]
        arguments_list = [token.strip() for token in arguments.split(",")]
        try:
            build(*arguments_list)
        except TypeError:
            raise ValueError(f"Catalog entry not found : {name}") from None
        return CatalogEntry(name, lambda: build(*arguments_list), f"{family} family with parameters {arguments}")
    raise ValueError(f"Catalog entry not found : {name}")


def describe() -> list[str]:
    lines = [f"{entry.name}: {entry.provenance}" for entry in CATALOG.values()]
    lines.extend([
        "cyclic:m,n,k: Z_m ∗_{Z_k} Z_n, amalgams of finite groups",
        "surface:g: closed surface group of genus g",
        "one-relator:v,u: one-relator group ⟨X, Y | vu⟩ split along v = u⁻¹",
        "centralizer:w,k: one extension-of-centralizers stage along w = x^k",
    ])
    return lines
