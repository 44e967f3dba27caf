# GMC estimator tests package
