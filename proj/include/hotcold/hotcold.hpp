#pragma once

#include "hotcold/config.hpp"
#include "hotcold/dqn.hpp"
#include "hotcold/errors.hpp"
#include "hotcold/experiments.hpp"
#include "hotcold/game.hpp"
#include "hotcold/io.hpp"
#include "hotcold/matchup.hpp"
#include "hotcold/mlp.hpp"
#include "hotcold/oracle.hpp"
#include "hotcold/strategist.hpp"
#include "hotcold/stumbler.hpp"
#include "hotcold/training.hpp"
