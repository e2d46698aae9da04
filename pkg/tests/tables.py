"""Hand-transcribed constant tables shared by the unit and acceptance suites."""
import math

# constants worked out by hand from the published row formulas
CKN_FIXTURE = [
    ("flat_nonnegative", {}, 2, 2, 3, 1.0),
    ("flat_nonnegative", {}, 1, 1, 3, 0.0),
    ("flat_nonpositive", {}, 0, 0, 4, 1.5),
    ("flat", {}, 0, 0, 3, 1.0),
    ("flat", {}, 3, 2, 3, 1.5),
    ("ric_lower_power", {"A": 2}, 3, 2, 3, 0.5),
    ("ric_lower_power", {"A": 1}, 2, 1, 3, 0.5),
    ("ric_lower_positive", {"B1": 0.5}, 2, 2, 3, (3 - math.sqrt(2)) / 2),
    ("ric_lower_positive", {"B1": 0.0}, 2, 2, 3, 1.0),
    ("sec_lower_power", {"A": 1.5}, 2, 2, 3, 0.5),
    ("sec_upper_power", {"A1": 2}, 1, 1, 4, 2.0),
    ("equality_power", {"A": 2}, 0, 0, 3, 2.0),
    ("equality_ratio", {"A": 2}, 1, 1, 3, 1.0),
    ("equality_ratio", {"A": 0}, 3, 3, 3, 2.0),
    ("sec_lower_positive", {"B1": 0.5}, 2, 2, 3, (3 - math.sqrt(2)) / 2),
    ("sec_upper_positive", {"B": 0.25}, 0, 0, 3, 0.75),
    ("sec_upper_positive", {"B": 1.0}, 0, 0, 3, 1.0),
]


COSTA_FIXTURE = [
    # (kind, params, n, t, C1..C7)
    ("flat", {}, 3, 0.5, (0.0, 0.0, 2.25, 0.25, 1.0, 1.0, 0.25)),
    ("sec_lower_power", {"A": 2}, 3, 1.0, (0.25, 0.25, 6.25, 2.25, 4.0, 4.0, 2.25)),
    ("equality_ratio", {"A": 2}, 3, 1.0, (0.25, 0.25, 6.25, 2.25, 4.0, 4.0, 2.25)),
    ("sec_upper_positive", {"B": 0.25}, 5, 0.0, (1.0, 1.0, 4.0, 1.0, 2.25, 2.25, 1.0)),
]

# one admissible parameter set per curvature row
ROW_PARAMS = {
    "i": {"A": 2.0, "A1": 1.5},
    "ii": {"A": 2.0, "A1": 1.0},
    "iii": {"B": 0.3, "B1": 0.6},
    "iv": {"B": 0.2, "B1": 0.1},
    "v": {"alpha": 2.0, "beta": 1.0},
    "vi": {},
    "vii": {"A": 0.5, "B": 0.5, "eps": 1.0},
}
