# Field sampler tests package
