"""Core package: settings, errors, the regression-graph model and statements."""
