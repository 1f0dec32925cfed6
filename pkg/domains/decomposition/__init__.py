# Decomposition domain package initialization
