#pragma once

#include "hbspectra/error.hpp"
#include "hbspectra/rational.hpp"
#include "hbspectra/matrix.hpp"
#include "hbspectra/sicanon.hpp"
#include "hbspectra/heatbath.hpp"
#include "hbspectra/spectral.hpp"
#include "hbspectra/transfer.hpp"
#include "hbspectra/models.hpp"
#include "hbspectra/simulate.hpp"
#include "hbspectra/io.hpp"
