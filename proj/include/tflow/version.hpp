#pragma once

#define TFLOW_VERSION "0.1.0"
