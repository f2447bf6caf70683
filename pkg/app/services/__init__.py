# Numerical core: co-arrays, signal model, statistics, span check, SS-MUSIC, Monte Carlo
