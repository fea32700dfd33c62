greedyAlgorithms = ("plain", "smart")

stallPolicies = ("fail", "restart")

setPolicies = ("uniform", "t1_first", "t2_first")

# Runs whose V minus W is a zero forcing set
countedStatuses = ("complete", "multi_component")
