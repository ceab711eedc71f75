#pragma once

// Umbrella header: the whole toolkit in one include.

#include "econet/errors.hpp"
#include "econet/text.hpp"
#include "econet/matrix.hpp"
#include "econet/scheme.hpp"
#include "econet/flows.hpp"
#include "econet/io_table.hpp"
#include "econet/network.hpp"
#include "econet/cascade.hpp"
#include "econet/pc.hpp"
#include "econet/analytics.hpp"
#include "econet/svg.hpp"
#include "econet/bundle.hpp"
