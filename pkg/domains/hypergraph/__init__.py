# Hypergraph domain package initialization
