#ifndef DOSAMC_HPP
#define DOSAMC_HPP

#include "dosamc/amc.hpp"
#include "dosamc/attacker.hpp"
#include "dosamc/detector.hpp"
#include "dosamc/network_chain.hpp"
#include "dosamc/node.hpp"
#include "dosamc/rng.hpp"
#include "dosamc/simulator.hpp"

#endif // DOSAMC_HPP
