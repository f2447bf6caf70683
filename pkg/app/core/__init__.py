# Core configuration, experiment-file loading and error types
