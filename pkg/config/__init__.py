# Configuration module: runtime settings and plot style
