# Coordination domain package initialization
