"""Linear-programming and least-squares machinery for interpolating estimators."""
