import pytest

from cohortlens.hierarchy import build_hierarchy
from cohortlens.query import QuerySpec, execute_query, whole_record_context
from cohortlens.stats import stats_for_all_types
from cohortlens.store import dataset_from_records
from cohortlens.synth import opiate_use_case_fixture

from datetime import date


def day(n):
    return date(2020, 1, 1) + (date(2020, 1, 2) - date(2020, 1, 1)) * (n - 1)


@pytest.fixture(scope="session")
def toy_hierarchy():
    return build_hierarchy(
        [
            ("ROOT", "", "root"),
            ("A", "ROOT", "a"),
            ("B", "ROOT", "b"),
            ("X", "ROOT", "x"),
            ("I50", "ROOT", "hf"),
            ("I50.1", "I50", "hf1"),
            ("I50.4", "I50", "hf4"),
            ("I50.41", "I50.4", "hf41"),
            ("I50.9", "I50", "hf9"),
        ]
    )


@pytest.fixture(scope="session")
def toy_dataset(toy_hierarchy):
    recs = [
        ("e1", "A", day(1), {"age": 60}),
        ("e1", "B", day(5), None),
        ("e1", "X", day(9), None),
        ("e2", "A", day(2), {"age": 70}),
        ("e2", "B", day(1), None),
        ("e3", "B", day(3), {"age": 80}),
        ("e4", "A", day(4), {"age": 80}),
        ("e4", "B", day(6), None),
    ]
    return dataset_from_records("toy", toy_hierarchy, recs)


@pytest.fixture(scope="session")
def toy_cohort(toy_dataset):
    return execute_query(toy_dataset, QuerySpec(inclusion=["A", "B"], outcome=["X"]))


@pytest.fixture(scope="session")
def use_case_dataset():
    return opiate_use_case_fixture()


@pytest.fixture(scope="session")
def use_case_cohort(use_case_dataset):
    spec = QuerySpec(inclusion=["PAIN", "DISCH"], outcome=["OPI"], lookback_days=365)
    return execute_query(use_case_dataset, spec)


@pytest.fixture(scope="session")
def use_case_stats(use_case_dataset, use_case_cohort):
    ctx = whole_record_context(use_case_cohort)
    return stats_for_all_types(ctx, use_case_dataset.hierarchy)
