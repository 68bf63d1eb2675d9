# Services module: curve sampling and SVG plotting
