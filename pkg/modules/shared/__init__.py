# Shared building blocks: signal type, errors, configuration, file I/O
