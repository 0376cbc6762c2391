#pragma once

#include "qwalk/angles.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/grover.hpp"
#include "qwalk/io.hpp"
#include "qwalk/oracle.hpp"
#include "qwalk/profile.hpp"
#include "qwalk/run_config.hpp"
#include "qwalk/state.hpp"
#include "qwalk/transfer.hpp"
