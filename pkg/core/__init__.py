# Exact core: numbers, continued fractions, classes, capacities, staircases
