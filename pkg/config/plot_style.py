"""
Plot style configuration for the SVG curve emitter.

Colors follow the figure conventions: the capacity lower bound in dark blue,
the volume curve in orange, the accumulation curve in green, and class
obstructions cycling through brown, red and purple.
"""

# Series colors by role
LOWER_BOUND_COLOR = "#1f3a93"
VOLUME_COLOR = "#ff7f0e"
ACC_CURVE_COLOR = "#2ca02c"
OBSTRUCTION_COLORS = ("#8c564b", "#d62728", "#9467bd")
FALLBACK_COLORS = ("#17becf", "#7f7f7f", "#bcbd22", "#e377c2")

# Column-label prefixes that select a role color
ROLE_PREFIXES = {
    "lower": LOWER_BOUND_COLOR,
    "c_lower": LOWER_BOUND_COLOR,
    "volume": VOLUME_COLOR,
    "acc": ACC_CURVE_COLOR,
}
OBSTRUCTION_PREFIXES = ("mu", "obstruction", "class")

# Figure geometry (inches) and line widths
FIGURE_SIZE = (8.0, 5.0)
LINE_WIDTH = 1.4
GRID_ALPHA = 0.3
X_LABEL = "z"
Y_LABEL = "capacity"

# Fixed salt so matplotlib's generated SVG ids are reproducible
SVG_HASH_SALT = "hirzebruch-staircases"
