# Oracle domain package initialization
