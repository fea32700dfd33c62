import csv
import json
import os
from dataclasses import asdict, is_dataclass
from typing import Any, Iterable, List, Sequence, Union

import numpy as np

Seed = Union[int, np.random.SeedSequence]


def makeRng(seed: Seed) -> np.random.Generator:
    """
    Creates the PCG64 generator used everywhere a run needs randomness.

    :param seed: A 64-bit integer or a spawned SeedSequence.
    :type seed: Seed
    :return: A seeded generator.
    :rtype: np.random.Generator
    """
    return np.random.Generator(np.random.PCG64(seed))


def spawnSeeds(seed: int, count: int) -> List[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def toJsonable(value: Any) -> Any:
    if is_dataclass(value) and not isinstance(value, type):
        return toJsonable(asdict(value))
    if isinstance(value, dict):
        return {str(k): toJsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [toJsonable(v) for v in items]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


def writeJson(path: str, data: Any) -> None:
    _ensureParent(path)
    with open(path, 'w', encoding="utf-8") as file:
        json.dump(toJsonable(data), file, indent=4)


def appendJsonLines(path: str, records: Iterable[Any]) -> None:
    _ensureParent(path)
    with open(path, 'a', encoding="utf-8") as file:
        for record in records:
            file.write(json.dumps(toJsonable(record)) + "\n")


def writeCsv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    _ensureParent(path)
    with open(path, 'w', encoding="utf-8", newline='') as file:
        writer = csv.writer(file)
        writer.writerow(header)
        for row in rows:
            writer.writerow([toJsonable(v) for v in row])


def parseRange(text: str) -> List[int]:
    """
    Parses "3:14" (inclusive), "3,5,7" or "8" into a list of integers.

    :param text: The range expression.
    :type text: str
    :return: The integers in ascending order of appearance.
    :rtype: List[int]
    """
    if ':' in text:
        low, high = text.split(':', 1)
        return list(range(int(low), int(high) + 1))
    return [int(part) for part in text.split(',') if part.strip()]


def _ensureParent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
