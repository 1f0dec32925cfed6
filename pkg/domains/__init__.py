# Domains package initialization
