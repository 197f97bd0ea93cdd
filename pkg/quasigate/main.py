from fastapi import FastAPI

from . import config
from .routes import ops

config.configure_logging()

app = FastAPI(title="quasigate")
app.include_router(ops.router)


@app.get("/")
def read_root():
    return {"message": "quasigate: loop operations on quasi-surfaces", "status": "ok"}
