# SDCA Lab: sum-difference co-arrays, span-property checks and SS-MUSIC sweeps
