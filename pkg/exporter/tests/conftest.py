import pytest
import torch

from eegnext_export.export import build_model


@pytest.fixture(scope="session")
def random_model():
    """Architecture-true randomly initialized model (no network access)."""
    torch.manual_seed(1234)
    return build_model()


@pytest.fixture(scope="session")
def random_state(random_model):
    return random_model.state_dict()


@pytest.fixture(scope="session")
def scaled_model():
    """Model whose layer-scale vectors carry 'trained-looking' values, so
    folding has real numeric work to do (the init value 1e-6 is degenerate)."""
    torch.manual_seed(99)
    model = build_model()
    with torch.no_grad():
        for name, param in model.named_parameters():
            if name.endswith("layer_scale"):
                param.copy_(0.5 + torch.rand_like(param))
    model.eval()
    return model
