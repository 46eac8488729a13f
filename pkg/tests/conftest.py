import random

import pytest

from dropout_mining.dataset import from_rows

WEATHER_HEADER = ["Outlook", "Temperature", "Humidity", "Windy", "Play"]
WEATHER_ROWS = [
    ["Sunny", "Hot", "High", "False", "No"],
    ["Sunny", "Hot", "High", "True", "No"],
    ["Overcast", "Hot", "High", "False", "Yes"],
    ["Rain", "Mild", "High", "False", "Yes"],
    ["Rain", "Cool", "Normal", "False", "Yes"],
    ["Rain", "Cool", "Normal", "True", "No"],
    ["Overcast", "Cool", "Normal", "True", "Yes"],
    ["Sunny", "Mild", "High", "False", "No"],
    ["Sunny", "Cool", "Normal", "False", "Yes"],
    ["Rain", "Mild", "Normal", "False", "Yes"],
    ["Sunny", "Mild", "Normal", "True", "Yes"],
    ["Overcast", "Mild", "High", "True", "Yes"],
    ["Overcast", "Hot", "Normal", "False", "Yes"],
    ["Rain", "Mild", "High", "True", "No"],
]

ACCEPTANCE_LINES = []


@pytest.fixture
def weather():
    return from_rows(WEATHER_HEADER, WEATHER_ROWS)


def random_consistent_dataset(rng: random.Random, max_attrs=6, max_rows=40, classes="AB"):
    """Random nominal data where equal feature vectors always share a class."""
    k = rng.randint(1, max_attrs)
    n = rng.randint(1, max_rows)
    domains = [[f"v{j}" for j in range(rng.randint(2, 3))] for _ in range(k)]
    label_of = {}
    rows = []
    for _ in range(n):
        x = tuple(rng.choice(dom) for dom in domains)
        if x not in label_of:
            label_of[x] = rng.choice(classes)
        rows.append(list(x) + [label_of[x]])
    header = [f"f{i}" for i in range(k)] + ["cls"]
    return from_rows(header, rows)


def random_noisy_dataset(rng: random.Random, max_attrs=8, max_rows=40):
    k = rng.randint(1, max_attrs)
    n = rng.randint(4, max_rows)
    rows = []
    for _ in range(n):
        x = [rng.choice("abc"[: 2 + (i % 2)]) for i in range(k)]
        if rng.random() < 0.6:
            y = "p" if x[rng.randrange(k)] == "a" else "q"
        else:
            y = rng.choice("pq")
        rows.append(x + [y])
    return from_rows([f"f{i}" for i in range(k)] + ["cls"], rows)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
