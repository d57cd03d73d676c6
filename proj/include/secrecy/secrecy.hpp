#pragma once

#include "secrecy/errors.hpp"
#include "secrecy/user_set.hpp"
#include "secrecy/channel.hpp"
#include "secrecy/geometry.hpp"
#include "secrecy/regions.hpp"
#include "secrecy/power_allocation.hpp"
#include "secrecy/jamming.hpp"
#include "secrecy/parallel.hpp"
#include "secrecy/oracle.hpp"
#include "secrecy/sweep.hpp"
