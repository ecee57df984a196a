from __future__ import annotations

import random
from collections import deque
from logging import getLogger
from typing import Iterable, Mapping, Sequence

from . import FactorGroup, SubgroupRecognizer
from .. import ValidationError
from ..constants import CosetSide
from ..words import EMPTY, GeneratorOrdering, Letter, Word, letter

logger = getLogger(__name__)

_FULL_ASSOCIATIVITY_CHECK = 40
_SPOT_CHECKS = 4000


class FiniteSubgroupRecognizer(SubgroupRecognizer):
    """Explicit element subset, each element stored with a shortest certificate"""

    def __init__(self, group: "FiniteGroup", generators: Sequence[int], labels: Sequence[str] | None = None):
        super().__init__(generators, labels)
        certificates = {group.identity: EMPTY}
        queue = deque([group.identity])
        while queue:
            element = queue.popleft()
            for generator, label in zip(self.generators, self.labels):
                for sign in (1, -1):
                    step = generator if sign > 0 else group.inverse(generator)
                    product = group.multiply(element, step)
                    if product not in certificates:
                        certificates[product] = certificates[element] * letter(label, sign)
                        queue.append(product)
        self.certificates = certificates

    @property
    def elements(self) -> frozenset[int]:
        return frozenset(self.certificates)

    @property
    def is_trivial(self) -> bool:
        return len(self.certificates) == 1

    @property
    def is_finite(self) -> bool:
        return True

    def express(self, g: int) -> Word | None:
        return self.certificates.get(g)


class FiniteGroup(FactorGroup):
    """Finite factor given by a complete multiplication table over named elements.

    Generators are element names; element ids are positions in `elements`.
    """

    kind = "finite"

    def __init__(self, ordering: GeneratorOrdering, elements: Sequence[str], table: Mapping[tuple[str, str], str]):
        super().__init__(ordering)
        self.names = tuple(elements)
        if len(set(self.names)) != len(self.names):
            raise ValidationError("duplicate element names in table")
        ids = {name: index for index, name in enumerate(self.names)}
        size = len(self.names)
        rows = [[-1] * size for _ in range(size)]
        for (left, right), result in table.items():
            for name in (left, right, result):
                if name not in ids:
                    raise ValidationError(f"table row {left} * {right} = {result} names an undeclared element {name}")
            rows[ids[left]][ids[right]] = ids[result]
        missing = [(self.names[i], self.names[j]) for i in range(size) for j in range(size) if rows[i][j] < 0]
        if missing:
            raise ValidationError("table is not total, missing {} * {}".format(*missing[0]))
        self._table = rows
        self._identity = self._find_identity()
        self._inverses = self._find_inverses()
        self._check_associative()
        for name in self.generators:
            if name not in ids:
                raise ValidationError(f"generator {name} is not a table element")
        self._generator_ids = {name: ids[name] for name in self.generators}
        self._spellings = self._geodesics()
        if len(self._spellings) != size:
            raise ValidationError("generators do not generate the whole table")
        logger.debug("finite group of order %s on %s", size, ",".join(self.generators))

    def _find_identity(self) -> int:
        size = len(self.names)
        for e in range(size):
            if all(self._table[e][x] == x and self._table[x][e] == x for x in range(size)):
                return e
        raise ValidationError("table has no identity element")

    def _find_inverses(self) -> list[int]:
        inverses = []
        for x, row in enumerate(self._table):
            candidates = [y for y, product in enumerate(row) if product == self._identity and self._table[y][x] == self._identity]
            if not candidates:
                raise ValidationError(f"element {self.names[x]} has no inverse")
            inverses.append(candidates[0])
        return inverses

    def _check_associative(self):
        size = len(self.names)
        t = self._table
        if size <= _FULL_ASSOCIATIVITY_CHECK:
            triples: Iterable[tuple[int, int, int]] = ((x, y, z) for x in range(size) for y in range(size) for z in range(size))
        else:
            rng = random.Random(size)
            triples = [(rng.randrange(size), rng.randrange(size), rng.randrange(size)) for _ in range(_SPOT_CHECKS)]
        for x, y, z in triples:
            if t[t[x][y]][z] != t[x][t[y][z]]:
                raise ValidationError(
                    "table is not associative at ({0} * {1}) * {2}".format(self.names[x], self.names[y], self.names[z])
                )

    def _geodesics(self) -> dict[int, Word]:
        spellings = {self._identity: EMPTY}
        queue = deque([self._identity])
        while queue:
            element = queue.popleft()
            for name, sign in self.ordering.letters():
                product = self.multiply(element, self._letter_value((name, sign)))
                if product not in spellings:
                    spellings[product] = spellings[element] * letter(name, sign)
                    queue.append(product)
        return spellings

    def _letter_value(self, read: Letter) -> int:
        name, sign = read
        value = self._generator_ids[name]
        return value if sign > 0 else self._inverses[value]

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def is_finite(self) -> bool:
        return True

    @property
    def size(self) -> int:
        return len(self.names)

    def element(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"element {name} not in table") from None

    def _require(self, *ids: int):
        size = len(self.names)
        for g in ids:
            if not 0 <= g < size:
                raise ValidationError(f"element id {g} out of table range 0..{size - 1}")

    def multiply(self, g: int, h: int) -> int:
        self._require(g, h)
        return self._table[g][h]

    def inverse(self, g: int) -> int:
        self._require(g)
        return self._inverses[g]

    def evaluate(self, word: Iterable[Letter]) -> int:
        result = self._identity
        for read in word:
            if read[0] not in self._generator_ids:
                raise ValidationError(f"generator {read[0]} does not belong to this factor")
            result = self._table[result][self._letter_value(read)]
        return result

    def spell(self, g: int) -> Word:
        return self._spellings[g]

    def order(self, g: int) -> int:
        power, result = 1, g
        while result != self._identity:
            result = self.multiply(result, g)
            power += 1
        return power

    def build_recognizer(self, gens: Sequence[int], labels: Sequence[str] | None = None) -> FiniteSubgroupRecognizer:
        return FiniteSubgroupRecognizer(self, gens, labels)

    def _coset_representative(self, recognizer: FiniteSubgroupRecognizer, g: int, side: CosetSide) -> int:
        if side is CosetSide.LEFT:
            coset = {self.multiply(g, c) for c in recognizer.elements}
        else:
            coset = {self.multiply(c, g) for c in recognizer.elements}
        return min(coset, key=self.key)

    def intersect(self, first: FiniteSubgroupRecognizer, second: FiniteSubgroupRecognizer) -> list[int]:
        common = sorted(first.elements & second.elements, key=self.key)
        generators: list[int] = []
        closure = self.build_recognizer([])
        for element in common:
            if not closure.is_member(element):
                generators.append(element)
                closure = self.build_recognizer(generators)
        return generators
