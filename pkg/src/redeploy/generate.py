"""Deterministic random instance generation for testing and benchmarks."""

from __future__ import annotations

import random

from .instance import Instance, validate


def random_instance(seed: int, *, surplus: int = 3, deficit: int = 5,
                    teachers: int = 6, max_alpha: int = 4, max_beta: int = 4,
                    accept_prob: float = 0.5) -> Instance:
    """A small valid instance, byte-reproducible from the seed.

    Acceptable sets are drawn per teacher with the given inclusion
    probability and redrawn until non-empty.
    """
    doc = random_instance_doc(seed, surplus=surplus, deficit=deficit,
                              teachers=teachers, max_alpha=max_alpha,
                              max_beta=max_beta, accept_prob=accept_prob)
    return validate(doc)


def random_instance_doc(seed: int, *, surplus: int = 3, deficit: int = 5,
                        teachers: int = 6, max_alpha: int = 4,
                        max_beta: int = 4,
                        accept_prob: float = 0.5) -> dict:
    if min(surplus, deficit, teachers) < 1:
        raise ValueError("need at least one school of each kind and one "
                         "teacher")
    rng = random.Random(seed)
    surplus_ids = [f"s{j + 1}" for j in range(surplus)]
    deficit_ids = [f"d{k + 1}" for k in range(deficit)]
    doc = {
        "surplus_schools": [{"id": s, "alpha": rng.randint(1, max_alpha)}
                            for s in surplus_ids],
        "deficit_schools": [{"id": d, "beta": rng.randint(1, max_beta)}
                            for d in deficit_ids],
        "teachers": [],
    }
    for i in range(teachers):
        acceptable: list[str] = []
        while not acceptable:
            acceptable = [d for d in deficit_ids
                          if rng.random() < accept_prob]
        doc["teachers"].append({
            "id": f"t{i + 1}",
            "origin": rng.choice(surplus_ids),
            "acceptable": acceptable,
        })
    return doc


def random_suite(count: int, seed: int, *, max_surplus: int = 3,
                 max_deficit: int = 5, max_teachers: int = 6,
                 max_alpha: int = 4, max_beta: int = 4) -> list[Instance]:
    """A reproducible family of instances with sizes varying up to the
    given bounds; the workhorse behind the randomized test suites."""
    master = random.Random(seed)
    out = []
    for _ in range(count):
        shape = dict(
            surplus=master.randint(1, max_surplus),
            deficit=master.randint(1, max_deficit),
            teachers=master.randint(1, max_teachers),
            max_alpha=max_alpha,
            max_beta=max_beta,
            accept_prob=master.uniform(0.3, 0.9),
        )
        out.append(random_instance(master.randrange(2 ** 32), **shape))
    return out
