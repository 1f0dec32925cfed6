# Graph domain package initialization
