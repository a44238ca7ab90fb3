#include "ctrlscore/reference.hpp"

namespace ctrlscore::reference {

const std::array<CentralityRow, 10> kNet1Centralities = {{
    {0.058, 0.154, 2.371, -1.458, 15.614},
    {0.142, 0.105, 0.628, -7.357, 9.361},
    {0.150, 0.154, 1.551, -1.111, 5.243},
    {0.107, 0.136, 1.804, -1.767, 10.729},
    {0.000, 0.000, 0.875, -0.417, 2.398},
    {0.000, 0.000, 0.875, -0.417, 2.398},
    {0.341, 0.232, 0.498, -49.568, 92.147},
    {0.000, 0.000, 0.875, -0.417, 2.398},
    {0.167, 0.115, 3.904, -0.517, 25.635},
    {0.034, 0.105, 1.551, -1.111, 5.243},
}};

const std::array<CentralityRow, 10> kAgg1Centralities = {{
    {0.077, 0.168, 1.591, -1.475, 7.243},
    {0.165, 0.115, 1.022, -8.399, 15.277},
    {0.163, 0.177, 1.591, -1.475, 7.243},
    {0.117, 0.117, 1.591, -1.475, 7.243},
    {0.000, 0.000, 0.875, -0.417, 2.398},
    {0.000, 0.000, 0.875, -0.417, 2.398},
    {0.249, 0.165, 0.778, -62.563, 78.507},
    {0.000, 0.000, 0.875, -0.417, 2.398},
    {0.192, 0.120, 1.022, -8.399, 15.277},
    {0.036, 0.139, 1.591, -1.475, 7.243},
}};

const std::array<double, 10> kNet2VcsTemporal = {0.150, 0.111, 0.107, 0.079, 0.000,
                                                 0.108, 0.111, 0.094, 0.136, 0.103};

const std::array<std::array<double, 6>, 10> kNet2AecsColumns = {{
    {0.244, 0.100, 0.143, 0.100, 0.143, 0.145},
    {0.064, 0.108, 0.084, 0.108, 0.084, 0.080},
    {0.056, 0.128, 0.084, 0.128, 0.084, 0.120},
    {0.221, 0.077, 0.143, 0.077, 0.143, 0.080},
    {0.056, 0.077, 0.084, 0.100, 0.093, 0.071},
    {0.075, 0.086, 0.093, 0.086, 0.093, 0.111},
    {0.103, 0.108, 0.109, 0.108, 0.100, 0.141},
    {0.078, 0.086, 0.084, 0.086, 0.084, 0.071},
    {0.052, 0.100, 0.093, 0.077, 0.084, 0.071},
    {0.052, 0.128, 0.084, 0.128, 0.084, 0.111},
}};

const std::array<std::array<double, 6>, 10> kVcsByNetwork = {{
    {0.058, 0.064, 0.064, 0.102, 0.110, 0.120},
    {0.142, 0.145, 0.124, 0.185, 0.191, 0.159},
    {0.150, 0.149, 0.140, 0.118, 0.115, 0.157},
    {0.107, 0.098, 0.112, 0.094, 0.090, 0.102},
    {0.000, 0.000, 0.000, 0.000, 0.000, 0.000},
    {0.000, 0.000, 0.000, 0.000, 0.000, 0.000},
    {0.341, 0.346, 0.319, 0.335, 0.334, 0.324},
    {0.000, 0.000, 0.032, 0.000, 0.000, 0.046},
    {0.167, 0.165, 0.154, 0.161, 0.157, 0.138},
    {0.034, 0.034, 0.055, 0.003, 0.003, 0.000},
}};

const std::array<std::array<double, 6>, 10> kAecsByNetwork = {{
    {0.154, 0.159, 0.133, 0.172, 0.176, 0.155},
    {0.105, 0.103, 0.111, 0.135, 0.136, 0.144},
    {0.154, 0.153, 0.123, 0.164, 0.162, 0.154},
    {0.136, 0.129, 0.156, 0.086, 0.085, 0.101},
    {0.000, 0.000, 0.000, 0.000, 0.000, 0.000},
    {0.000, 0.000, 0.000, 0.000, 0.000, 0.000},
    {0.232, 0.229, 0.226, 0.196, 0.196, 0.193},
    {0.000, 0.000, 0.058, 0.000, 0.000, 0.064},
    {0.115, 0.114, 0.114, 0.107, 0.106, 0.105},
    {0.105, 0.113, 0.079, 0.140, 0.140, 0.085},
}};

const std::array<const char*, 6> kNetworkColumnIds = {"net1", "net3", "net4",
                                                      "net5", "net6", "net7"};

}  // namespace ctrlscore::reference
