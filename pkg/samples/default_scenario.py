# Chase one random target with every policy and print what each run cost

from sinkchase import Policy, SimConfig, simulate

for policy in (Policy.always(), Policy.beacon(), Policy.direction_change(),
               Policy.probability_gain(0.2)):
    record = simulate(SimConfig(policy=policy, seed=7))
    print(f"{str(policy):15} caught after {record.time_to_catch:4} steps, "
          f"{record.total_hops:5} hops, {record.transfer_count:4} transfers")
