#pragma once
// umbrella header

#include "sms/core.hpp"
#include "sms/measures.hpp"
#include "sms/baselines.hpp"
#include "sms/partition.hpp"
#include "sms/sort.hpp"
#include "sms/multiselect.hpp"
#include "sms/finger_list.hpp"
#include "sms/deferred.hpp"
#include "sms/succinct.hpp"
#include "sms/harness.hpp"
