"""
Published numbers for the F-actin unit graph and the automaton runs on it.

Comparisons against these only gate when the ingested graph reproduces
the reference graph statistics; on any other graph they are informational.
"""

# ======================================================
# GRAPH
# ======================================================

GRAPH_NODES = 2961
GRAPH_EDGES = 3025
DEGREE_HISTOGRAM = {1: 883, 2: 1009, 3: 1066, 4: 2}
DIAMETER_NODES = 1130
MEAN_DISTANCE = 376
MEDIAN_DISTANCE = 338
DEGREE_MEAN = 2.044
DEGREE_STDDEV = 0.8

# ======================================================
# SINGLE-NODE STIMULATION
# ======================================================

SINGLE_A0 = {"mean": 840, "median": 847, "min": 2, "max": 1131}
SINGLE_A0_BAND = (2, 15)
SINGLE_A0_BAND_COUNT = 29
SINGLE_REL_TOL = 0.05
BAND_COUNT_TOL = 3

SINGLE_A1_SAMPLE = 70
SINGLE_A1 = {"mean": 862, "median": 869}

# ======================================================
# RATIO SWEEPS
# ======================================================

POWER_LAW_A = 4.7
POWER_LAW_A_TOL = 1.5
POWER_LAW_B = -0.6
POWER_LAW_B_TOL = 0.15

# (rule, scenario) -> grand means over rho = 0.1 .. 0.9
GRAND_MEANS = {
    ("a0", "plus-minus"): {"p": 1997, "c": 10, "e": 665},
    ("a1", "plus"): {"p": 1118, "c": 15, "e": 588},
    ("a1", "plus-minus"): {"p": 1667, "c": 21, "e": 615},
}
GRAND_MEANS_REL_TOL = 0.25

CYCLE_LENGTH_BAND = (5, 130)
CYCLE_EXCITATION_BAND = (450, 850)
MIN_CYCLE_LENGTH = 5

# ======================================================
# RINGS AND CAPACITY
# ======================================================

RING_CENSUS_BY_RESIDUE = {"HIS": 8, "PHE": 12, "TRP": 4, "TYR": 16}
RING_TOTAL = 40
BITS_PER_FILAMENT = 3.2e5
BITS_PER_IN2 = 6.452e16
