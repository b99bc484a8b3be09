import random

from hypothesis import strategies as st

from scattered.generators import random_ordinal, random_presentation, random_tree


ordinals = st.integers(0, 2**32).map(lambda s: random_ordinal(random.Random(s)))
trees = st.integers(0, 2**32).map(lambda s: random_tree(random.Random(s), 4))
family_trees = st.integers(0, 2**32).map(lambda s: random_tree(random.Random(s), 4, families=True))
presentations = st.integers(0, 2**32).map(lambda s: random_presentation(random.Random(s), 4))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
