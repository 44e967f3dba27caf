# Hermite/Wick tests package
