# API route handlers: health, co-arrays, span checks, Monte Carlo
