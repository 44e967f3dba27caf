# Kernel tests package
