#pragma once

#include "eigbound/log_scalar.hpp"
#include "eigbound/matrix.hpp"
#include "eigbound/eigcore.hpp"
#include "eigbound/blockbounds.hpp"
#include "eigbound/tribounds.hpp"
#include "eigbound/aed.hpp"
#include "eigbound/multiexp.hpp"
#include "eigbound/io.hpp"
#include "eigbound/report.hpp"
#include "eigbound/commands.hpp"
