# Event decomposition tests package
