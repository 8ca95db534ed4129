#pragma once

#include "qcap/binary_channel.hpp"
#include "qcap/capacity.hpp"
#include "qcap/channel.hpp"
#include "qcap/errors.hpp"
#include "qcap/protocol.hpp"
#include "qcap/qubit_algebra.hpp"
#include "qcap/random.hpp"
#include "qcap/reconstruction.hpp"
#include "qcap/table_io.hpp"
#include "qcap/uncertainty.hpp"
