#pragma once

#include "twr/core.hpp"
#include "twr/crosscheck.hpp"
#include "twr/lorentz.hpp"
#include "twr/shell_geometry.hpp"
#include "twr/spin_connection.hpp"
#include "twr/report_io.hpp"
#include "twr/transport.hpp"
